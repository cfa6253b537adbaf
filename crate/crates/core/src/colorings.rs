//! Region-based colorings of `S²(r)`: the tetrahedral 4-coloring, the
//! cap-plus-lunes 4-coloring for radii just above 1/2, sampling-based
//! properness checks, exact distance to a color class, and the antipodal
//! (Borsuk–Ulam) search on the distance-to-color map.
//!
//! A coloring is an ordered region list evaluated first-match-wins; the last
//! region must be the catch-all, so every point gets exactly one color.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{
    closed_form_gk, embed_graph, max_closed_form_radius, rigidity_certificate, smallest_feasible_k,
    EmbedOptions,
};
use crate::sampling::{rng_stream, uniform_on_sphere};
use crate::sphere_geom::{
    circle_intersection, neighbor_circle, orthonormal_frame, Boundary, Circle, GeomError,
    SphereParams, SpherePoint, Vec3,
};
use crate::udgraph::{gen_groetzsch, gen_odd_cycle};

/// Default cap scale: the color-0 cap has angular radius `κ√ε`, `ε = r − 1/2`.
pub const DEFAULT_KAPPA: f64 = 8.0;
/// Largest radius accepted by [`cap_lune_coloring`].
pub const CAP_LUNE_MAX_RADIUS: f64 = 0.52;
/// A monochromatic pair counts as a violation only if both points are farther
/// than this from every color boundary.
pub const DEFAULT_BOUNDARY_MARGIN: f64 = 1e-12;
/// Side offset used to read the colors on either side of a boundary piece.
const SIDE_OFFSET: f64 = 1e-9;
const SAMPLE_CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColoringError {
    #[error("widths {widths:?} do not partition [0, 2π)")]
    BadPartition { widths: Vec<f64> },
    #[error("radius {r} outside ({lo}, {hi}]")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },
    #[error("cap angular radius {theta0} outside (0, π/2)")]
    BadCapRadius { theta0: f64 },
    #[error("color {color} does not occur in the coloring")]
    UnknownColor { color: usize },
    #[error("color class {color} is empty")]
    EmptyColorClass { color: usize },
    #[error("malformed coloring: {0}")]
    Malformed(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// One region of a coloring. Directions (`center`, `sites`) are unit vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Cap {
        center: [f64; 3],
        angular_radius: f64,
        boundary: Boundary,
    },
    /// Longitudes in the half-open interval `[start, end)`, `0 ≤ start < end ≤ 2π`.
    Lune {
        start: f64,
        end: f64,
    },
    /// Closed cell of `sites[index]` in the chordal Voronoi diagram of `sites`.
    VoronoiCell {
        sites: Vec<[f64; 3]>,
        index: usize,
    },
    Everywhere,
}

fn vec3(a: &[f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

fn longitude(u: &Vec3) -> f64 {
    let l = u.y.atan2(u.x);
    if l < 0.0 {
        l + TAU
    } else {
        l
    }
}

impl Region {
    /// Membership of the unit direction `u`.
    fn contains(&self, u: &Vec3) -> bool {
        match self {
            Region::Cap {
                center,
                angular_radius,
                boundary,
            } => {
                let dot = u.dot(&vec3(center));
                match boundary {
                    Boundary::Open => dot > angular_radius.cos(),
                    Boundary::Closed => dot >= angular_radius.cos(),
                }
            }
            Region::Lune { start, end } => {
                let l = longitude(u);
                *start <= l && l < *end
            }
            Region::VoronoiCell { sites, index } => {
                let own = u.dot(&vec3(&sites[*index]));
                sites.iter().all(|s| u.dot(&vec3(s)) <= own)
            }
            Region::Everywhere => true,
        }
    }

    fn validate(&self) -> Result<Region, ColoringError> {
        let bad = |m: &str| Err(ColoringError::Malformed(m.into()));
        let unit = |a: &[f64; 3]| -> Option<[f64; 3]> {
            let v = vec3(a);
            let n = v.norm();
            (n.is_finite() && n > 1e-12).then(|| {
                let u = v / n;
                [u.x, u.y, u.z]
            })
        };
        match self {
            Region::Cap {
                center,
                angular_radius,
                boundary,
            } => {
                let Some(c) = unit(center) else {
                    return bad("cap center must be a nonzero finite vector");
                };
                if !(*angular_radius > 0.0 && *angular_radius < PI) {
                    return bad("cap angular radius must lie in (0, π)");
                }
                Ok(Region::Cap {
                    center: c,
                    angular_radius: *angular_radius,
                    boundary: *boundary,
                })
            }
            Region::Lune { start, end } => {
                if !(0.0 <= *start && start < end && *end <= TAU) {
                    return bad("lune needs 0 ≤ start < end ≤ 2π");
                }
                Ok(self.clone())
            }
            Region::VoronoiCell { sites, index } => {
                if sites.len() < 2 || *index >= sites.len() {
                    return bad("Voronoi cell needs at least two sites and a valid index");
                }
                let sites = sites
                    .iter()
                    .map(|s| unit(s).ok_or(()))
                    .collect::<Result<Vec<_>, _>>();
                let Ok(sites) = sites else {
                    return bad("Voronoi sites must be nonzero finite vectors");
                };
                for i in 0..sites.len() {
                    for j in (i + 1)..sites.len() {
                        if (vec3(&sites[i]) - vec3(&sites[j])).norm() < 1e-12 {
                            return bad("Voronoi sites must be distinct");
                        }
                    }
                }
                Ok(Region::VoronoiCell {
                    sites,
                    index: *index,
                })
            }
            Region::Everywhere => Ok(Region::Everywhere),
        }
    }

    fn boundary_arcs(&self) -> Vec<Arc> {
        match self {
            Region::Cap {
                center,
                angular_radius,
                ..
            } => vec![Arc::circle(vec3(center), angular_radius.cos())],
            Region::Lune { start, end } => {
                if end - start >= TAU {
                    Vec::new()
                } else {
                    vec![Arc::meridian(*start), Arc::meridian(*end)]
                }
            }
            Region::VoronoiCell { sites, index } => {
                let own = vec3(&sites[*index]);
                let mut arcs = Vec::new();
                for (j, s) in sites.iter().enumerate() {
                    if j == *index {
                        continue;
                    }
                    let n = (own - vec3(s)).normalize();
                    let mut arc = Arc::circle(n, 0.0);
                    let mut empty = false;
                    for (k, t) in sites.iter().enumerate() {
                        if k == *index || k == j {
                            continue;
                        }
                        match arc.clip_half(&(own - vec3(t))) {
                            Some(a) => arc = a,
                            None => {
                                empty = true;
                                break;
                            }
                        }
                    }
                    if !empty {
                        arcs.push(arc);
                    }
                }
                arcs
            }
            Region::Everywhere => Vec::new(),
        }
    }
}

/// Arc of a circle on the unit sphere: `c0·n + s0(cos t·e1 + sin t·e2)` for
/// `t ∈ [start, start + sweep]`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Arc {
    n: Vec3,
    e1: Vec3,
    e2: Vec3,
    c0: f64,
    s0: f64,
    start: f64,
    sweep: f64,
}

impl Arc {
    fn circle(axis: Vec3, c0: f64) -> Arc {
        let (n, e1, e2) = orthonormal_frame(&axis);
        Arc {
            n,
            e1,
            e2,
            c0,
            s0: (1.0 - c0 * c0).max(0.0).sqrt(),
            start: 0.0,
            sweep: TAU,
        }
    }

    /// Half great circle from the north pole to the south pole at longitude `lon`.
    fn meridian(lon: f64) -> Arc {
        let (s, c) = lon.sin_cos();
        Arc {
            n: Vec3::new(-s, c, 0.0),
            e1: Vec3::z(),
            e2: Vec3::new(c, s, 0.0),
            c0: 0.0,
            s0: 1.0,
            start: 0.0,
            sweep: PI,
        }
    }

    fn is_full(&self) -> bool {
        self.sweep >= TAU
    }

    fn at(&self, t: f64) -> Vec3 {
        self.n * self.c0 + (self.e1 * t.cos() + self.e2 * t.sin()) * self.s0
    }

    fn param_of(&self, u: &Vec3) -> f64 {
        u.dot(&self.e2).atan2(u.dot(&self.e1))
    }

    /// Offset of parameter `t` from the arc start, in `[0, 2π)`.
    fn offset(&self, t: f64) -> f64 {
        (t - self.start).rem_euclid(TAU)
    }

    fn end(&self) -> f64 {
        self.start + self.sweep
    }

    fn with_range(&self, start: f64, sweep: f64) -> Arc {
        Arc {
            start,
            sweep,
            ..*self
        }
    }

    /// Restriction to `{u : u·w ≥ 0}`; only used on great circles, where the
    /// allowed set is a half circle.
    fn clip_half(&self, w: &Vec3) -> Option<Arc> {
        let a = w.dot(&self.e1);
        let b = w.dot(&self.e2);
        if a.hypot(b) < 1e-15 {
            return Some(*self);
        }
        let tau = b.atan2(a);
        let half = self.with_range(tau - PI / 2.0, PI);
        if self.is_full() {
            return Some(half);
        }
        intersect_ranges(self, &half)
    }

    fn circle_on(&self, r: f64) -> Result<Circle, GeomError> {
        let center = SpherePoint::new_unchecked(r, self.n * r);
        Circle::new(center, r * (2.0 - 2.0 * self.c0).sqrt())
    }

    /// Unit-sphere distance from `u` to the arc.
    fn distance(&self, u: &Vec3) -> f64 {
        let a = u.dot(&self.e1);
        let b = u.dot(&self.e2);
        if a.hypot(b) > 1e-300 {
            let t = b.atan2(a);
            if self.offset(t) <= self.sweep {
                return (u - self.at(t)).norm();
            }
        } else {
            return (u - self.at(self.start)).norm();
        }
        (u - self.at(self.start))
            .norm()
            .min((u - self.at(self.end())).norm())
    }

    /// Parameter on the arc minimizing `u·p(t)`, i.e. the farthest point from `u`.
    fn farthest_param(&self, u: &Vec3) -> f64 {
        let a = u.dot(&self.e1);
        let b = u.dot(&self.e2);
        let t = b.atan2(a) + PI;
        if self.is_full() || self.offset(t) <= self.sweep {
            return t;
        }
        let (s, e) = (self.start, self.end());
        if u.dot(&self.at(s)) <= u.dot(&self.at(e)) {
            s
        } else {
            e
        }
    }
}

/// Intersection of two arcs of the same circle, each of length at most π.
fn intersect_ranges(a: &Arc, b: &Arc) -> Option<Arc> {
    let d = a.offset(b.start);
    if d <= a.sweep {
        let len = (a.sweep - d).min(b.sweep);
        return Some(a.with_range(b.start, len));
    }
    let wrap = d + b.sweep - TAU;
    if wrap >= 0.0 {
        return Some(a.with_range(a.start, wrap.min(a.sweep)));
    }
    None
}

/// A boundary piece together with the colors found on it and on either side.
#[derive(Debug, Clone, PartialEq)]
struct Piece {
    arc: Arc,
    colors: Vec<usize>,
}

impl Piece {
    fn separates(&self) -> bool {
        self.colors.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoredRegion {
    #[serde(flatten)]
    pub region: Region,
    pub color: usize,
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    r: f64,
    regions: Vec<ColoredRegion>,
}

/// Ordered, total, deterministic region coloring of `S²(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ColoringRepr", into = "ColoringRepr")]
pub struct RegionColoring {
    params: SphereParams,
    regions: Vec<ColoredRegion>,
    n_colors: usize,
    #[serde(skip)]
    pieces: Vec<Piece>,
}

impl TryFrom<ColoringRepr> for RegionColoring {
    type Error = ColoringError;
    fn try_from(repr: ColoringRepr) -> Result<Self, Self::Error> {
        RegionColoring::new(SphereParams::new(repr.r)?, repr.regions)
    }
}

impl From<RegionColoring> for ColoringRepr {
    fn from(c: RegionColoring) -> Self {
        ColoringRepr {
            r: c.params.r(),
            regions: c.regions,
        }
    }
}

impl RegionColoring {
    pub fn new(params: SphereParams, regions: Vec<ColoredRegion>) -> Result<Self, ColoringError> {
        if !matches!(
            regions.last(),
            Some(ColoredRegion {
                region: Region::Everywhere,
                ..
            })
        ) {
            return Err(ColoringError::Malformed(
                "the last region must be the catch-all".into(),
            ));
        }
        let regions = regions
            .iter()
            .map(|cr| {
                Ok(ColoredRegion {
                    region: cr.region.validate()?,
                    color: cr.color,
                })
            })
            .collect::<Result<Vec<_>, ColoringError>>()?;
        let n_colors = regions.iter().map(|cr| cr.color).max().unwrap_or(0) + 1;
        for c in 0..n_colors {
            if !regions.iter().any(|cr| cr.color == c) {
                return Err(ColoringError::Malformed(format!(
                    "color ids must be contiguous from 0; {c} is missing"
                )));
            }
        }
        let mut coloring = RegionColoring {
            params,
            regions,
            n_colors,
            pieces: Vec::new(),
        };
        coloring.pieces = coloring.build_pieces()?;
        Ok(coloring)
    }

    pub fn params(&self) -> &SphereParams {
        &self.params
    }

    pub fn regions(&self) -> &[ColoredRegion] {
        &self.regions
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn color_of(&self, p: &SpherePoint) -> usize {
        self.color_of_dir(&(p.v() / p.r()))
    }

    fn color_of_dir(&self, u: &Vec3) -> usize {
        self.regions
            .iter()
            .find(|cr| cr.region.contains(u))
            .map(|cr| cr.color)
            .expect("catch-all region matches every point")
    }

    /// Splits every region boundary at its crossings with every other one and
    /// records the colors met on and beside each piece.
    fn build_pieces(&self) -> Result<Vec<Piece>, ColoringError> {
        let r = self.params.r();
        let arcs: Vec<Arc> = self
            .regions
            .iter()
            .flat_map(|cr| cr.region.boundary_arcs())
            .filter(|a| a.sweep > 1e-12)
            .collect();
        let mut pieces = Vec::new();
        for (i, a) in arcs.iter().enumerate() {
            let mut cuts: Vec<f64> = Vec::new();
            let push_cut = |u: &Vec3, cuts: &mut Vec<f64>| {
                let s = a.offset(a.param_of(u));
                if s <= a.sweep + 1e-12 {
                    cuts.push(s.min(a.sweep));
                } else if TAU - s <= 1e-12 {
                    cuts.push(0.0);
                }
            };
            for (j, b) in arcs.iter().enumerate() {
                if i == j {
                    continue;
                }
                match circle_intersection(&a.circle_on(r)?, &b.circle_on(r)?) {
                    Ok(points) => {
                        for p in points {
                            let u = p.v() / r;
                            let sb = b.offset(b.param_of(&u));
                            if sb <= b.sweep + 1e-12 || TAU - sb <= 1e-12 {
                                push_cut(&u, &mut cuts);
                            }
                        }
                    }
                    Err(GeomError::CoincidentCircles) => {
                        if !b.is_full() {
                            push_cut(&b.at(b.start), &mut cuts);
                            push_cut(&b.at(b.end()), &mut cuts);
                        }
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            if !a.is_full() {
                cuts.push(0.0);
                cuts.push(a.sweep);
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
            let ranges: Vec<(f64, f64)> = if cuts.is_empty() {
                vec![(a.start, TAU)]
            } else if a.is_full() {
                let mut v: Vec<(f64, f64)> = cuts
                    .windows(2)
                    .map(|w| (a.start + w[0], w[1] - w[0]))
                    .collect();
                let last = *cuts.last().unwrap();
                v.push((a.start + last, TAU - last + cuts[0]));
                v
            } else {
                cuts.windows(2)
                    .map(|w| (a.start + w[0], w[1] - w[0]))
                    .collect()
            };
            for (start, sweep) in ranges {
                if sweep <= 1e-12 {
                    continue;
                }
                let arc = a.with_range(start, sweep);
                pieces.push(Piece {
                    colors: self.colors_near(&arc),
                    arc,
                });
            }
        }
        Ok(pieces)
    }

    fn colors_near(&self, arc: &Arc) -> Vec<usize> {
        let t = arc.start + 0.5 * arc.sweep;
        let u = arc.at(t);
        let tangent = (-arc.e1 * t.sin() + arc.e2 * t.cos()) * arc.s0;
        let side = u.cross(&tangent).normalize();
        let mut colors = vec![
            self.color_of_dir(&u),
            self.color_of_dir(&(u + side * SIDE_OFFSET).normalize()),
            self.color_of_dir(&(u - side * SIDE_OFFSET).normalize()),
        ];
        colors.sort_unstable();
        colors.dedup();
        colors
    }

    /// Unit-sphere distance from `u` to the nearest color boundary.
    fn boundary_distance_dir(&self, u: &Vec3) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.separates())
            .map(|p| p.arc.distance(u))
            .fold(f64::INFINITY, f64::min)
    }

    /// Chord distance from `p` to the nearest boundary between two colors.
    pub fn boundary_distance(&self, p: &SpherePoint) -> f64 {
        self.boundary_distance_dir(&(p.v() / p.r())) * self.params.r()
    }

    /// Unit-sphere distance from `u` to the closure of color class `color`.
    fn class_distance_dir(&self, u: &Vec3, color: usize) -> Result<f64, ColoringError> {
        if color >= self.n_colors {
            return Err(ColoringError::UnknownColor { color });
        }
        if self.color_of_dir(u) == color {
            return Ok(0.0);
        }
        let d = self
            .pieces
            .iter()
            .filter(|p| p.colors.contains(&color))
            .map(|p| p.arc.distance(u))
            .fold(f64::INFINITY, f64::min);
        if d.is_finite() {
            Ok(d)
        } else {
            Err(ColoringError::EmptyColorClass { color })
        }
    }
}

/// Single-color coloring; every unit pair is monochromatic.
pub fn constant_coloring(r: f64) -> Result<RegionColoring, ColoringError> {
    RegionColoring::new(
        SphereParams::new(r)?,
        vec![ColoredRegion {
            region: Region::Everywhere,
            color: 0,
        }],
    )
}

/// Directions of the regular tetrahedron used by [`tetrahedral_coloring`]:
/// one vertex at the north pole, the others at longitudes 0, 2π/3, 4π/3.
pub fn tetrahedron_sites() -> [[f64; 3]; 4] {
    let z = -1.0 / 3.0;
    let s = (1.0f64 - z * z).sqrt();
    let mut sites = [[0.0, 0.0, 1.0]; 4];
    for (i, site) in sites.iter_mut().enumerate().skip(1) {
        let lon = TAU * (i - 1) as f64 / 3.0;
        *site = [s * lon.cos(), s * lon.sin(), z];
    }
    sites
}

/// Four colors: the chordal Voronoi cells of an inscribed regular tetrahedron.
/// Cells 0–2 are listed first; cell 3 is the catch-all.
pub fn tetrahedral_coloring(r: f64) -> Result<RegionColoring, ColoringError> {
    let sites = tetrahedron_sites().to_vec();
    let mut regions: Vec<ColoredRegion> = (0..3)
        .map(|index| ColoredRegion {
            region: Region::VoronoiCell {
                sites: sites.clone(),
                index,
            },
            color: index,
        })
        .collect();
    regions.push(ColoredRegion {
        region: Region::Everywhere,
        color: 3,
    });
    RegionColoring::new(SphereParams::new(r)?, regions)
}

/// `κ√(r − 1/2)` with the default `κ`.
pub fn default_theta0(r: f64) -> f64 {
    DEFAULT_KAPPA * (r - 0.5).max(0.0).sqrt()
}

/// Color 0 is the open polar cap of angular radius `theta0` around the north
/// pole; colors 1–3 are three lunes of the given longitude widths.
pub fn cap_lune_coloring(
    r: f64,
    theta0: Option<f64>,
    widths: Option<[f64; 3]>,
) -> Result<RegionColoring, ColoringError> {
    if !(r > 0.5 && r <= CAP_LUNE_MAX_RADIUS) {
        return Err(ColoringError::RadiusOutOfRange {
            r,
            lo: 0.5,
            hi: CAP_LUNE_MAX_RADIUS,
        });
    }
    let theta0 = theta0.unwrap_or_else(|| default_theta0(r));
    if !(theta0 > 0.0 && theta0 < PI / 2.0) {
        return Err(ColoringError::BadCapRadius { theta0 });
    }
    let w = widths.unwrap_or([TAU / 3.0; 3]);
    if w.iter().any(|x| !(*x > 0.0)) || (w.iter().sum::<f64>() - TAU).abs() > 1e-12 {
        return Err(ColoringError::BadPartition { widths: w.to_vec() });
    }
    let b1 = w[0];
    let b2 = w[0] + w[1];
    let regions = vec![
        ColoredRegion {
            region: Region::Cap {
                center: [0.0, 0.0, 1.0],
                angular_radius: theta0,
                boundary: Boundary::Open,
            },
            color: 0,
        },
        ColoredRegion {
            region: Region::Lune {
                start: 0.0,
                end: b1,
            },
            color: 1,
        },
        ColoredRegion {
            region: Region::Lune { start: b1, end: b2 },
            color: 2,
        },
        ColoredRegion {
            region: Region::Lune {
                start: b2,
                end: TAU,
            },
            color: 3,
        },
        ColoredRegion {
            region: Region::Everywhere,
            color: 3,
        },
    ];
    RegionColoring::new(SphereParams::new(r)?, regions)
}

/// A sampled unit-distance pair with equal colors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub p: SpherePoint,
    pub q: SpherePoint,
    pub chord: f64,
    pub color: usize,
    /// Smaller of the two points' chord distances to a color boundary.
    pub boundary_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropernessReport {
    pub r: f64,
    pub samples: usize,
    pub seed: u64,
    pub margin: f64,
    pub violations: Vec<Violation>,
    /// Monochromatic pairs with a point within `margin` of a boundary.
    pub boundary_grazes: usize,
}

impl PropernessReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `x` uniformly on the sphere and `y` uniformly on its neighbor circle,
/// and collects the monochromatic pairs. `margin` is the boundary distance
/// below which a monochromatic pair is counted as a graze instead.
pub fn properness_sample(
    c: &RegionColoring,
    n_samples: usize,
    seed: u64,
    margin: f64,
) -> PropernessReport {
    let params = *c.params();
    let chunks = n_samples.div_ceil(SAMPLE_CHUNK);
    let per_chunk: Vec<(Vec<Violation>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = rng_stream(seed, chunk as u64);
            let count = SAMPLE_CHUNK.min(n_samples - chunk * SAMPLE_CHUNK);
            let mut found = Vec::new();
            let mut grazes = 0;
            for _ in 0..count {
                let x = uniform_on_sphere(&mut rng, &params);
                let y = neighbor_circle(&x, &params).point_at(rng.random_range(0.0..TAU));
                let color = c.color_of(&x);
                if c.color_of(&y) != color {
                    continue;
                }
                let bd = c.boundary_distance(&x).min(c.boundary_distance(&y));
                if bd > margin {
                    found.push(Violation {
                        chord: x.chord(&y),
                        p: x,
                        q: y,
                        color,
                        boundary_distance: bd,
                    });
                } else {
                    grazes += 1;
                }
            }
            (found, grazes)
        })
        .collect();
    let mut violations = Vec::new();
    let mut boundary_grazes = 0;
    for (v, g) in per_chunk {
        violations.extend(v);
        boundary_grazes += g;
    }
    PropernessReport {
        r: params.r(),
        samples: n_samples,
        seed,
        margin,
        violations,
        boundary_grazes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorDistance {
    pub distance: f64,
    pub error_bound: f64,
}

/// Chord distance from `x` to the closure of a color class.
///
/// Computed exactly from the boundary pieces; the error bound covers
/// floating-point rounding only.
pub fn dist_to_color(
    x: &SpherePoint,
    c: &RegionColoring,
    color: usize,
) -> Result<ColorDistance, ColoringError> {
    let r = c.params().r();
    let d = c.class_distance_dir(&(x.v() / x.r()), color)?;
    Ok(ColorDistance {
        distance: d * r,
        error_bound: 1e-12 * r.max(1.0),
    })
}

/// Vertex directions of the icosahedron subdivided `level` times
/// (`10·4^level + 2` points).
pub fn icosahedral_grid(level: usize) -> Vec<Vec3> {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, p, 0.0),
        (1.0, p, 0.0),
        (-1.0, -p, 0.0),
        (1.0, -p, 0.0),
        (0.0, -1.0, p),
        (0.0, 1.0, p),
        (0.0, -1.0, -p),
        (0.0, 1.0, -p),
        (p, 0.0, -1.0),
        (p, 0.0, 1.0),
        (-p, 0.0, -1.0),
        (-p, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push((verts[a] + verts[b]).normalize());
                verts.len() - 1
            })
        };
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts
}

/// Which components of `f(x*) = (dist to a, dist to b)` vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuCase {
    /// `f(x*) = (0, 0)`.
    BothZero,
    /// `f(x*) = (a, b)` with `a, b > 0`.
    BothPositive,
    /// Exactly one component is zero.
    OneZero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuReport {
    pub colors: [usize; 2],
    pub x: SpherePoint,
    pub f_x: [f64; 2],
    pub f_antipode: [f64; 2],
    pub gap: f64,
    pub case: BuCase,
    /// Best gap after each grid level; non-increasing.
    pub level_gaps: Vec<f64>,
}

const BU_CANDIDATES: usize = 12;
const BU_ZERO_TOL: f64 = 1e-7;

struct BuMap<'a> {
    c: &'a RegionColoring,
    a: usize,
    b: usize,
}

impl BuMap<'_> {
    fn f(&self, u: &Vec3) -> [f64; 2] {
        let r = self.c.params().r();
        [
            self.c.class_distance_dir(u, self.a).unwrap_or(f64::NAN) * r,
            self.c.class_distance_dir(u, self.b).unwrap_or(f64::NAN) * r,
        ]
    }

    fn g(&self, u: &Vec3) -> Vector2<f64> {
        let p = self.f(u);
        let q = self.f(&-u);
        Vector2::new(p[0] - q[0], p[1] - q[1])
    }

    fn gap(&self, u: &Vec3) -> f64 {
        self.g(u).norm()
    }
}

fn tangent_point(base: &Vec3, e1: &Vec3, e2: &Vec3, a: f64, b: f64) -> Vec3 {
    (base + e1 * a + e2 * b).normalize()
}

/// Minimizes `h` over the tangent plane at `base` with a Nelder–Mead simplex.
fn nelder_mead(h: impl Fn(&Vec3) -> f64, base: &Vec3, step: f64, tol: f64) -> (Vec3, f64) {
    let (_, e1, e2) = orthonormal_frame(base);
    let eval = |p: &Vector2<f64>| h(&tangent_point(base, &e1, &e2, p.x, p.y));
    let mut simplex: Vec<(Vector2<f64>, f64)> = [
        Vector2::new(0.0, 0.0),
        Vector2::new(step, 0.0),
        Vector2::new(0.0, step),
    ]
    .into_iter()
    .map(|p| (p, eval(&p)))
    .collect();
    for _ in 0..2000 {
        simplex.sort_by(|x, y| x.1.total_cmp(&y.1));
        let size = (simplex[1].0 - simplex[0].0)
            .norm()
            .max((simplex[2].0 - simplex[0].0).norm());
        if size < tol || simplex[0].1 == 0.0 {
            break;
        }
        let centroid = (simplex[0].0 + simplex[1].0) / 2.0;
        let worst = simplex[2];
        let reflect = centroid + (centroid - worst.0);
        let fr = eval(&reflect);
        if fr < simplex[0].1 {
            let expand = centroid + (centroid - worst.0) * 2.0;
            let fe = eval(&expand);
            simplex[2] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = if fr < worst.1 {
                centroid + (reflect - centroid) * 0.5
            } else {
                centroid + (worst.0 - centroid) * 0.5
            };
            let fc = eval(&contract);
            if fc < worst.1.min(fr) {
                simplex[2] = (contract, fc);
            } else {
                let best = simplex[0].0;
                for s in simplex.iter_mut().skip(1) {
                    s.0 = best + (s.0 - best) * 0.5;
                    s.1 = eval(&s.0);
                }
            }
        }
    }
    simplex.sort_by(|x, y| x.1.total_cmp(&y.1));
    let p = simplex[0].0;
    (tangent_point(base, &e1, &e2, p.x, p.y), simplex[0].1)
}

/// Newton iterations on the odd map `g` with a finite-difference Jacobian,
/// keeping only steps that reduce the gap.
fn newton_polish(map: &BuMap, start: Vec3, gap: f64) -> (Vec3, f64) {
    let (mut u, mut best) = (start, gap);
    let h = 1e-7;
    for _ in 0..50 {
        if best == 0.0 {
            break;
        }
        let (_, e1, e2) = orthonormal_frame(&u);
        let g0 = map.g(&u);
        let col = |e: &Vec3| {
            (map.g(&(u + e * h).normalize()) - map.g(&(u - e * h).normalize())) / (2.0 * h)
        };
        let jac = Matrix2::from_columns(&[col(&e1), col(&e2)]);
        let Some(inv) = jac.try_inverse() else {
            break;
        };
        let step = -(inv * g0);
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-4 {
            let cand = tangent_point(&u, &e1, &e2, t * step.x, t * step.y);
            let gc = map.gap(&cand);
            if gc < best {
                u = cand;
                best = gc;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (u, best)
}

/// Searches for `x*` with `f(x*) = f(−x*)`, `f = (dist to color_a, dist to color_b)`.
///
/// Grid levels `0..=grid_level` are scanned in turn; the best grid points of
/// each level are refined by Nelder–Mead (to `refine_tol` in the tangent
/// plane) and then by Newton on `f(x) − f(−x)`.
pub fn borsuk_ulam_search(
    c: &RegionColoring,
    color_a: usize,
    color_b: usize,
    grid_level: usize,
    refine_tol: f64,
) -> Result<BuReport, ColoringError> {
    let probe = c.params().north_pole();
    dist_to_color(&probe, c, color_a)?;
    dist_to_color(&probe, c, color_b)?;
    let map = BuMap {
        c,
        a: color_a,
        b: color_b,
    };
    let mut best: Option<(Vec3, f64)> = None;
    let mut level_gaps = Vec::with_capacity(grid_level + 1);
    for level in 0..=grid_level {
        let grid = icosahedral_grid(level);
        let mut scored: Vec<(usize, f64)> = grid
            .par_iter()
            .enumerate()
            .map(|(i, u)| (i, map.gap(u)))
            .collect();
        scored.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        let spacing = 1.1 / (1u64 << level) as f64;
        let refined: Vec<(Vec3, f64)> = scored
            .iter()
            .take(BU_CANDIDATES)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&&(i, g)| {
                let (u, gm) = nelder_mead(|v| map.gap(v), &grid[i], 0.25 * spacing, refine_tol);
                let (u, gm) = if gm < g { (u, gm) } else { (grid[i], g) };
                newton_polish(&map, u, gm)
            })
            .collect();
        for cand in refined {
            if best.as_ref().is_none_or(|b| cand.1 < b.1) {
                best = Some(cand);
            }
        }
        level_gaps.push(best.as_ref().map_or(f64::INFINITY, |b| b.1));
    }
    let (u, gap) = best.expect("grid is nonempty");
    let r = c.params().r();
    let f_x = map.f(&u);
    let f_antipode = map.f(&-u);
    let zero = |v: f64| v <= BU_ZERO_TOL;
    let case = match (zero(f_x[0]), zero(f_x[1])) {
        (true, true) => BuCase::BothZero,
        (false, false) => BuCase::BothPositive,
        _ => BuCase::OneZero,
    };
    Ok(BuReport {
        colors: [color_a, color_b],
        x: SpherePoint::new_unchecked(r, u * r),
        f_x,
        f_antipode,
        gap,
        case,
        level_gaps,
    })
}

/// Largest chord between two points of the closure of a color class, taken
/// over its boundary. Valid for classes containing no antipodal pair, where
/// the maximum is attained on the boundary.
pub fn class_diameter(c: &RegionColoring, color: usize) -> Result<f64, ColoringError> {
    if color >= c.n_colors() {
        return Err(ColoringError::UnknownColor { color });
    }
    let arcs: Vec<Arc> = c
        .pieces
        .iter()
        .filter(|p| p.colors.contains(&color))
        .map(|p| p.arc)
        .collect();
    if arcs.is_empty() {
        return Err(ColoringError::EmptyColorClass { color });
    }
    const GRID: usize = 33;
    let mut best = 0.0f64;
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i..] {
            let ta = |k: usize| a.start + a.sweep * k as f64 / (GRID - 1) as f64;
            let tb = |k: usize| b.start + b.sweep * k as f64 / (GRID - 1) as f64;
            let mut start = (ta(0), tb(0), f64::INFINITY);
            for ka in 0..GRID {
                for kb in 0..GRID {
                    let dot = a.at(ta(ka)).dot(&b.at(tb(kb)));
                    if dot < start.2 {
                        start = (ta(ka), tb(kb), dot);
                    }
                }
            }
            // alternate exact farthest-point steps; the dot product never increases
            let (mut s, _, mut dot) = start;
            for _ in 0..200 {
                let t = b.farthest_param(&a.at(s));
                s = a.farthest_param(&b.at(t));
                let next = a.at(s).dot(&b.at(t));
                let done = dot - next <= 1e-16;
                dot = dot.min(next);
                if done {
                    break;
                }
            }
            best = best.max((2.0 - 2.0 * dot).max(0.0).sqrt());
        }
    }
    Ok(best * c.params().r())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Radius at which the cell diameter equals 1.
    pub r_threshold: f64,
    /// Cell diameter on the unit sphere.
    pub unit_diameter: f64,
    pub bisection_steps: usize,
}

/// Radius above which the tetrahedral coloring stops being proper: the cell
/// diameter, found by [`class_diameter`], crosses 1. Bisection on `r`.
pub fn tetrahedral_threshold(tol: f64) -> Result<ThresholdReport, ColoringError> {
    let excess = |r: f64| -> Result<f64, ColoringError> {
        Ok(class_diameter(&tetrahedral_coloring(r)?, 0)? - 1.0)
    };
    let (mut lo, mut hi) = (0.5 + 1e-9, 1.0);
    let mut steps = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    Ok(ThresholdReport {
        r_threshold: 0.5 * (lo + hi),
        unit_diameter: class_diameter(&tetrahedral_coloring(1.0)?, 0)?,
        bisection_steps: steps,
    })
}

/// Area `2πr²(1 − cos θ0)` of the color-0 cap.
pub fn cap_area(r: f64, theta0: f64) -> f64 {
    TAU * r * r * (1.0 - theta0.cos())
}

/// Averaging lower bound `4πr²/s0` on the number of vertices of a
/// 4-chromatic unit-distance graph on `S²(r)`, from the cap-lune coloring.
pub fn n4_lower_bound(r: f64, theta0: Option<f64>) -> Result<f64, ColoringError> {
    let c = cap_lune_coloring(r, theta0, None)?;
    let Region::Cap { angular_radius, .. } = c.regions()[0].region else {
        unreachable!("color 0 is the cap");
    };
    Ok(2.0 * TAU * r * r / cap_area(r, angular_radius))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapAreaReport {
    pub epsilon: f64,
    pub r: f64,
    pub theta0: f64,
    pub s0: f64,
    pub s0_over_epsilon: f64,
    pub n4_bound: f64,
    /// Bound `r²/ε` that a cap of area `4πε` would give.
    pub ideal_bound: f64,
    pub monte_carlo: Option<MonteCarloArea>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloArea {
    pub samples: usize,
    pub seed: u64,
    pub s0: f64,
    pub std_err: f64,
}

/// Area of a color class estimated by uniform sampling.
pub fn class_area_monte_carlo(
    c: &RegionColoring,
    color: usize,
    samples: usize,
    seed: u64,
) -> MonteCarloArea {
    let params = *c.params();
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = rng_stream(seed, chunk as u64);
            let count = SAMPLE_CHUNK.min(samples - chunk * SAMPLE_CHUNK);
            (0..count)
                .filter(|_| c.color_of(&uniform_on_sphere(&mut rng, &params)) == color)
                .count()
        })
        .sum();
    let total = 2.0 * TAU * params.r() * params.r();
    let p = hits as f64 / samples as f64;
    MonteCarloArea {
        samples,
        seed,
        s0: p * total,
        std_err: (p * (1.0 - p) / samples as f64).sqrt() * total,
    }
}

pub fn cap_area_report(
    epsilon: f64,
    theta0: Option<f64>,
    mc: Option<(usize, u64)>,
) -> Result<CapAreaReport, ColoringError> {
    let r = 0.5 + epsilon;
    let c = cap_lune_coloring(r, theta0, None)?;
    let Region::Cap { angular_radius, .. } = c.regions()[0].region else {
        unreachable!("color 0 is the cap");
    };
    let s0 = cap_area(r, angular_radius);
    Ok(CapAreaReport {
        epsilon,
        r,
        theta0: angular_radius,
        s0,
        s0_over_epsilon: s0 / epsilon,
        n4_bound: 2.0 * TAU * r * r / s0,
        ideal_bound: r * r / epsilon,
        monte_carlo: mc.map(|(n, seed)| class_area_monte_carlo(&c, 0, n, seed)),
    })
}

/// CSV rows `epsilon,r,theta0,s0,s0_over_epsilon,n4_bound,ideal_bound` with the default cap.
pub fn sweep_csv(epsilons: &[f64]) -> Result<String, ColoringError> {
    let mut out = String::from("epsilon,r,theta0,s0,s0_over_epsilon,n4_bound,ideal_bound\n");
    for &e in epsilons {
        let rep = cap_area_report(e, None, None)?;
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            rep.epsilon,
            rep.r,
            rep.theta0,
            rep.s0,
            rep.s0_over_epsilon,
            rep.n4_bound,
            rep.ideal_bound
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Checked by a computation in this run.
    Verified,
    /// The computation contradicts the claim at this radius.
    Refuted,
    /// The construction does not exist at this radius.
    NotApplicable,
    /// Quoted from the literature, not checked.
    Cited,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub claim: String,
    pub status: RowStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub r: f64,
    /// Best lower bound on χ verified in this run.
    pub verified_lower: Option<usize>,
    /// Best upper bound on χ verified in this run.
    pub verified_upper: Option<usize>,
    pub rows: Vec<TableRow>,
}

/// Radius at which the Grötzsch graph has a unit-distance embedding on the sphere.
pub const GROETZSCH_RADIUS: f64 = 0.54003829;

/// Checks the computable lower/upper bounds on `χ(S²(r))` at one radius and
/// lists the remaining known bounds as cited.
pub fn table_report(r: f64, seed: u64) -> Result<TableReport, ColoringError> {
    let mut rows = Vec::new();
    let mut lower = None;
    let mut upper = None;
    let row = |claim: &str, status, detail: String| TableRow {
        claim: claim.into(),
        status,
        detail,
    };

    if !(r > 0.0) {
        return Err(ColoringError::Malformed(format!(
            "radius {r} must be positive"
        )));
    }
    if r < 0.5 {
        rows.push(row(
            "chi = 1 for r < 1/2",
            RowStatus::Verified,
            format!("sphere diameter {} < 1: no unit chords", 2.0 * r),
        ));
        lower = Some(1);
        upper = Some(1);
    } else if r == 0.5 {
        rows.push(row(
            "chi = 2 for r = 1/2",
            RowStatus::Verified,
            "unit chords are exactly the antipodal pairs; color by open hemisphere plus half of the equator".into(),
        ));
        lower = Some(2);
        upper = Some(2);
    } else {
        // odd cycle: chi >= 3
        let k = if r < max_closed_form_radius() {
            smallest_feasible_k(r).unwrap_or(1)
        } else {
            1
        };
        let cycle_ok = if k > 1 {
            closed_form_gk(r, k, None).is_ok()
        } else {
            let opts = EmbedOptions {
                seed,
                ..EmbedOptions::default()
            };
            embed_graph(&gen_odd_cycle(1), r, &opts).is_ok()
        };
        rows.push(row(
            "chi >= 3 for r > 1/2 (odd cycle)",
            if cycle_ok {
                RowStatus::Verified
            } else {
                RowStatus::Refuted
            },
            format!("unit-distance cycle of length {} embedded", 2 * k + 1),
        ));
        if cycle_ok {
            lower = Some(3);
        }

        // rigid pendant cycle
        if r < max_closed_form_radius() {
            let emb = closed_form_gk(r, k.max(2), None);
            match emb {
                Ok(e) => {
                    let cert = rigidity_certificate(&e);
                    rows.push(row(
                        "G_k embeds rigidly for r < sqrt(3)/3",
                        if cert.certified {
                            RowStatus::Verified
                        } else {
                            RowStatus::Refuted
                        },
                        format!(
                            "k = {}, |V + V'| = {:.3e}, |det J| = {:.3e}",
                            e.k, cert.v_plus_vp, cert.det_abs
                        ),
                    ));
                }
                Err(err) => rows.push(row(
                    "G_k embeds rigidly for r < sqrt(3)/3",
                    RowStatus::Refuted,
                    err.to_string(),
                )),
            }
        } else {
            rows.push(row(
                "G_k embeds rigidly for r < sqrt(3)/3",
                RowStatus::NotApplicable,
                "closed form needs r < sqrt(3)/3".into(),
            ));
        }

        // Groetzsch: chi >= 4 witness
        let opts = EmbedOptions {
            seed,
            starts: 64,
            ..EmbedOptions::default()
        };
        let g = gen_groetzsch();
        match embed_graph(&g, r, &opts) {
            Ok(rep) => {
                rows.push(row(
                    "Groetzsch graph embeds (chi >= 4)",
                    RowStatus::Verified,
                    format!("residual {:.3e}", rep.residual_norm),
                ));
                lower = Some(4);
            }
            Err(_) => rows.push(row(
                "Groetzsch graph embeds (chi >= 4)",
                RowStatus::NotApplicable,
                format!(
                    "no embedding at fixed r = {r}; the graph is rigid and embeds near r = {GROETZSCH_RADIUS}"
                ),
            )),
        }

        // tetrahedral 4-coloring
        let tetra = tetrahedral_coloring(r)?;
        let diam = class_diameter(&tetra, 0)?;
        let sample = properness_sample(&tetra, 100_000, seed, DEFAULT_BOUNDARY_MARGIN);
        let proper = diam < 1.0 && sample.is_clean();
        rows.push(row(
            "chi <= 4 for 1/2 < r <= sqrt(3 - sqrt(3))/2 (tetrahedral coloring)",
            if proper {
                RowStatus::Verified
            } else {
                RowStatus::Refuted
            },
            format!(
                "cell diameter {diam:.9}; {} violations in {} sampled unit pairs",
                sample.violations.len(),
                sample.samples
            ),
        ));
        if proper {
            upper = Some(4);
        }
        if r <= CAP_LUNE_MAX_RADIUS {
            let c = cap_lune_coloring(r, None, None)?;
            let s = properness_sample(&c, 100_000, seed, DEFAULT_BOUNDARY_MARGIN);
            rows.push(row(
                "chi <= 4 near r = 1/2 (cap and three lunes)",
                if s.is_clean() {
                    RowStatus::Verified
                } else {
                    RowStatus::Refuted
                },
                format!(
                    "n4 >= {:.6}; {} violations in {} sampled unit pairs",
                    n4_lower_bound(r, None)?,
                    s.violations.len(),
                    s.samples
                ),
            ));
            if s.is_clean() {
                upper = Some(4);
            }
        }
    }

    let s5 = (5.0f64 - 5f64.sqrt()).sqrt() / (2.0 * 2f64.sqrt());
    let s5p = (5.0f64 + 5f64.sqrt()).sqrt() / (2.0 * 2f64.sqrt());
    let cited: [(bool, &str); 7] = [
        (
            r > (3.0f64 - 3f64.sqrt()).sqrt() / 2.0,
            "chi >= 4 for r > sqrt(3 - sqrt(3))/2",
        ),
        (
            (r - s5).abs() < 1e-12,
            "chi >= 5 at r = sqrt(5 - sqrt(5))/(2 sqrt(2))",
        ),
        (
            (r - 0.5f64.sqrt()).abs() < 1e-12,
            "chi = 4 at r = 1/sqrt(2)",
        ),
        (
            (r - s5p).abs() < 1e-12,
            "chi >= 5 at r = sqrt(5 + sqrt(5))/(2 sqrt(2))",
        ),
        (
            r > 0.5 && r <= 1.0 / 3f64.sqrt(),
            "chi <= 5 for r <= 1/sqrt(3)",
        ),
        (
            r > 0.5 && r <= 3f64.sqrt() / 2.0,
            "chi <= 6 for r <= sqrt(3)/2",
        ),
        (r >= 12.44, "chi <= 7 for r >= 12.44"),
    ];
    for (applies, claim) in cited {
        if applies {
            rows.push(row(claim, RowStatus::Cited, "cited, not verified".into()));
        }
    }
    if r > 0.5 {
        rows.push(row(
            "chi <= 15 for r > 1/2",
            RowStatus::Cited,
            "cited, not verified".into(),
        ));
    }
    Ok(TableReport {
        r,
        verified_lower: lower,
        verified_upper: upper,
        rows,
    })
}
