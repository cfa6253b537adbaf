//! Spherical geometry on `S²(r)` in the chord metric.
//!
//! Every distance in this module is the ambient Euclidean distance between
//! points of the sphere. Circles on the sphere are plane sections and are
//! described by a spherical center and a chordal radius; the plane of such a
//! circle is `{p : center·p = r² − chordal_radius²/2}`.
//!
//! The unit-distance neighbors of a point `x` form the *neighbor circle*,
//! centered at the antipode `−x` with chordal radius `ρ = √(4r² − 1)`. Its
//! Euclidean diameter is `d = ρ / r`.

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;

/// Relative tolerance for the on-sphere invariant of [`SpherePoint`].
pub const ON_SPHERE_TOL: f64 = 1e-12;

/// Default cutoff on the normalized discriminant `1 − |p₀|²/r²` below which two
/// circles are treated as tangent.
pub const DEFAULT_DISCRIMINANT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("sphere radius {0} must be greater than 1/2")]
    RadiusTooSmall(f64),
    #[error("vector of norm {norm} is not on the sphere of radius {r}")]
    OffSphere { norm: f64, r: f64 },
    #[error("points belong to spheres of different radii ({0} vs {1})")]
    RadiusMismatch(f64, f64),
    #[error("chordal radius {chordal_radius} outside (0, 2r) for r = {r}")]
    InvalidChordalRadius { chordal_radius: f64, r: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("circles coincide")]
    CoincidentCircles,
}

/// Radius of the sphere together with the derived unit-distance invariants.
///
/// Only `r` is stored; `ρ` and `d` are recomputed on demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct SphereParams {
    r: f64,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    r: f64,
}

impl TryFrom<ParamsRepr> for SphereParams {
    type Error = GeomError;
    fn try_from(repr: ParamsRepr) -> Result<Self, GeomError> {
        SphereParams::new(repr.r)
    }
}

impl From<SphereParams> for ParamsRepr {
    fn from(p: SphereParams) -> Self {
        ParamsRepr { r: p.r }
    }
}

impl SphereParams {
    pub fn new(r: f64) -> Result<Self, GeomError> {
        if !(r.is_finite() && r > 0.5) {
            return Err(GeomError::RadiusTooSmall(r));
        }
        Ok(SphereParams { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Chordal radius of a neighbor circle, `√(4r² − 1)`.
    pub fn rho(&self) -> f64 {
        (4.0 * self.r * self.r - 1.0).sqrt()
    }

    /// Euclidean diameter of a neighbor circle, `ρ / r`.
    pub fn d(&self) -> f64 {
        self.rho() / self.r
    }

    /// Central angle subtended by a unit chord.
    pub fn unit_angle(&self) -> f64 {
        chord_to_angle(self.r, 1.0)
    }

    pub fn point(&self, v: Vec3) -> Result<SpherePoint, GeomError> {
        SpherePoint::new(self, v)
    }

    /// Radially projects a nonzero vector onto the sphere.
    pub fn project(&self, v: Vec3) -> Result<SpherePoint, GeomError> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::DegenerateInput(
                "cannot project the zero vector".into(),
            ));
        }
        Ok(SpherePoint {
            r: self.r,
            v: v * (self.r / n),
        })
    }

    pub fn from_spherical(&self, colatitude: f64, longitude: f64) -> SpherePoint {
        let (st, ct) = colatitude.sin_cos();
        let (sl, cl) = longitude.sin_cos();
        SpherePoint {
            r: self.r,
            v: Vec3::new(self.r * st * cl, self.r * st * sl, self.r * ct),
        }
    }

    pub fn north_pole(&self) -> SpherePoint {
        SpherePoint {
            r: self.r,
            v: Vec3::new(0.0, 0.0, self.r),
        }
    }
}

/// Central angle for a chord of the given length on a sphere of radius `r`.
pub fn chord_to_angle(r: f64, chord: f64) -> f64 {
    2.0 * (chord / (2.0 * r)).clamp(-1.0, 1.0).asin()
}

/// Chord length for a central angle on a sphere of radius `r`.
pub fn angle_to_chord(r: f64, angle: f64) -> f64 {
    2.0 * r * (0.5 * angle).sin()
}

/// Geodesic (great-circle) length of a chord. Conversion helper only.
pub fn chord_to_geodesic(r: f64, chord: f64) -> f64 {
    r * chord_to_angle(r, chord)
}

/// A point of `S²(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct SpherePoint {
    r: f64,
    v: Vec3,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    r: f64,
    v: [f64; 3],
}

impl TryFrom<PointRepr> for SpherePoint {
    type Error = GeomError;
    fn try_from(repr: PointRepr) -> Result<Self, GeomError> {
        let params = SphereParams::new(repr.r)?;
        SpherePoint::new(&params, Vec3::from(repr.v))
    }
}

impl From<SpherePoint> for PointRepr {
    fn from(p: SpherePoint) -> Self {
        PointRepr {
            r: p.r,
            v: [p.v.x, p.v.y, p.v.z],
        }
    }
}

impl SpherePoint {
    pub fn new(params: &SphereParams, v: Vec3) -> Result<Self, GeomError> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - params.r).abs() > ON_SPHERE_TOL * params.r {
            return Err(GeomError::OffSphere { norm, r: params.r });
        }
        Ok(SpherePoint { r: params.r, v })
    }

    pub(crate) fn new_unchecked(r: f64, v: Vec3) -> Self {
        SpherePoint { r, v }
    }

    pub fn v(&self) -> &Vec3 {
        &self.v
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint {
            r: self.r,
            v: -self.v,
        }
    }

    pub fn chord(&self, other: &SpherePoint) -> f64 {
        (self.v - other.v).norm()
    }

    /// Great-circle distance; the rest of the crate works with chords.
    pub fn geodesic(&self, other: &SpherePoint) -> f64 {
        chord_to_geodesic(self.r, self.chord(other))
    }

    pub fn colatitude(&self) -> f64 {
        (self.v.z / self.r).clamp(-1.0, 1.0).acos()
    }

    /// Longitude in `[0, 2π)`.
    pub fn longitude(&self) -> f64 {
        let l = self.v.y.atan2(self.v.x);
        if l < 0.0 {
            l + std::f64::consts::TAU
        } else {
            l
        }
    }

    pub fn rotated(&self, rot: &Rotation3<f64>) -> SpherePoint {
        SpherePoint {
            r: self.r,
            v: rot * self.v,
        }
    }
}

/// Counterclockwise rotation about the `z` axis.
pub fn rotation_about_z(angle: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), angle)
}

/// A circle on `S²(r)`: the set of sphere points at chord `chordal_radius`
/// from `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircleRepr", into = "CircleRepr")]
pub struct Circle {
    center: SpherePoint,
    chordal_radius: f64,
}

#[derive(Serialize, Deserialize)]
struct CircleRepr {
    r: f64,
    center: [f64; 3],
    chordal_radius: f64,
}

impl TryFrom<CircleRepr> for Circle {
    type Error = GeomError;
    fn try_from(repr: CircleRepr) -> Result<Self, GeomError> {
        let params = SphereParams::new(repr.r)?;
        Circle::new(params.point(Vec3::from(repr.center))?, repr.chordal_radius)
    }
}

impl From<Circle> for CircleRepr {
    fn from(c: Circle) -> Self {
        let v = c.center.v;
        CircleRepr {
            r: c.center.r,
            center: [v.x, v.y, v.z],
            chordal_radius: c.chordal_radius,
        }
    }
}

impl Circle {
    pub fn new(center: SpherePoint, chordal_radius: f64) -> Result<Self, GeomError> {
        let r = center.r;
        if !(chordal_radius > 0.0 && chordal_radius < 2.0 * r) {
            return Err(GeomError::InvalidChordalRadius { chordal_radius, r });
        }
        Ok(Circle {
            center,
            chordal_radius,
        })
    }

    /// Great circle with the given pole.
    pub fn great(pole: SpherePoint) -> Circle {
        let r = pole.r;
        Circle {
            center: pole,
            chordal_radius: std::f64::consts::SQRT_2 * r,
        }
    }

    pub fn center(&self) -> &SpherePoint {
        &self.center
    }

    pub fn chordal_radius(&self) -> f64 {
        self.chordal_radius
    }

    pub fn sphere_radius(&self) -> f64 {
        self.center.r
    }

    /// Value of `center·p` shared by every point `p` of the circle.
    pub fn plane_offset(&self) -> f64 {
        let r = self.center.r;
        r * r - 0.5 * self.chordal_radius * self.chordal_radius
    }

    pub fn euclidean_radius(&self) -> f64 {
        let r = self.center.r;
        let c = self.chordal_radius;
        c * (1.0 - c * c / (4.0 * r * r)).max(0.0).sqrt()
    }

    pub fn euclidean_diameter(&self) -> f64 {
        2.0 * self.euclidean_radius()
    }

    pub fn angular_radius(&self) -> f64 {
        chord_to_angle(self.center.r, self.chordal_radius)
    }

    /// Orthonormal frame `(axis, e1, e2)` with `axis` pointing at the center.
    pub fn frame(&self) -> (Vec3, Vec3, Vec3) {
        orthonormal_frame(&(self.center.v / self.center.r))
    }

    /// Point at parameter `t` (radians) around the circle.
    pub fn point_at(&self, t: f64) -> SpherePoint {
        let (axis, e1, e2) = self.frame();
        let r = self.center.r;
        let along = self.plane_offset() / r;
        let rad = self.euclidean_radius();
        let v = axis * along + (e1 * t.cos() + e2 * t.sin()) * rad;
        SpherePoint::new_unchecked(r, v)
    }

    /// Plane-section residual `|center·p − (r² − c²/2)|`.
    pub fn plane_residual(&self, p: &SpherePoint) -> f64 {
        (self.center.v.dot(&p.v) - self.plane_offset()).abs()
    }
}

/// Returns `(axis, e1, e2)`: a right-handed orthonormal frame with `e1 × e2 = axis`.
pub(crate) fn orthonormal_frame(axis: &Vec3) -> (Vec3, Vec3, Vec3) {
    let a = axis.normalize();
    let helper = if a.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let e1 = helper.cross(&a).normalize();
    let e2 = a.cross(&e1);
    (a, e1, e2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Closed,
}

/// Spherical cap: sphere points within a chord bound of `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub center: SpherePoint,
    pub chordal_radius: f64,
    pub boundary: Boundary,
}

impl Cap {
    pub fn contains(&self, p: &SpherePoint) -> bool {
        let c = self.center.chord(p);
        match self.boundary {
            Boundary::Open => c < self.chordal_radius,
            Boundary::Closed => c <= self.chordal_radius,
        }
    }

    pub fn angular_radius(&self) -> f64 {
        chord_to_angle(self.center.r, self.chordal_radius)
    }

    /// Largest chord between two points of the cap.
    pub fn euclidean_diameter(&self) -> f64 {
        let r = self.center.r;
        let theta = self.angular_radius();
        if theta >= std::f64::consts::FRAC_PI_2 {
            2.0 * r
        } else {
            2.0 * r * theta.sin()
        }
    }

    pub fn area(&self) -> f64 {
        let r = self.center.r;
        std::f64::consts::TAU * r * r * (1.0 - self.angular_radius().cos())
    }
}

/// The unit-distance neighbors of `x`: the circle of chordal radius `ρ` about `−x`.
pub fn neighbor_circle(x: &SpherePoint, p: &SphereParams) -> Circle {
    Circle {
        center: x.antipode(),
        chordal_radius: p.rho(),
    }
}

/// Centers of the two `ρ`-circles through `x` and `y`, returned as `(c_r, c_l)`
/// with `det[x; y; c_r] > 0` and `det[x; y; c_l] < 0`.
pub fn circle_centers(
    x: &SpherePoint,
    y: &SpherePoint,
    p: &SphereParams,
) -> Result<(SpherePoint, SpherePoint), GeomError> {
    check_same_sphere(x, y)?;
    let r = p.r();
    let sep = x.chord(y);
    if sep <= 0.0 {
        return Err(GeomError::DegenerateInput("x and y coincide".into()));
    }
    if sep >= p.d() {
        return Err(GeomError::DegenerateInput(format!(
            "separation {sep} is not below the neighbor-circle diameter {}",
            p.d()
        )));
    }
    // c = α(x + y) + β(x × y) with c·x = c·y = r² − ρ²/2 = 1/2 − r².
    let target = 0.5 - r * r;
    let sum = x.v + y.v;
    let normal = x.v.cross(&y.v);
    let nn = normal.norm_squared();
    let alpha = target / (2.0 * r * r - 0.5 * sep * sep);
    let disc = r * r - alpha * alpha * sum.norm_squared();
    if nn <= 0.0 || disc <= 0.0 {
        return Err(GeomError::DegenerateInput(
            "the two circle centers coincide".into(),
        ));
    }
    let beta = (disc / nn).sqrt();
    let cr = sum * alpha + normal * beta;
    let cl = sum * alpha - normal * beta;
    Ok((
        SpherePoint::new_unchecked(r, cr),
        SpherePoint::new_unchecked(r, cl),
    ))
}

pub fn circle_intersection(a: &Circle, b: &Circle) -> Result<Vec<SpherePoint>, GeomError> {
    circle_intersection_with_tol(a, b, DEFAULT_DISCRIMINANT_TOL)
}

/// Intersection of two circles on the same sphere: zero, one (tangency within
/// `disc_tol`) or two points.
pub fn circle_intersection_with_tol(
    a: &Circle,
    b: &Circle,
    disc_tol: f64,
) -> Result<Vec<SpherePoint>, GeomError> {
    check_same_sphere(&a.center, &b.center)?;
    let r = a.sphere_radius();
    let n1 = a.center.v / r;
    let n2 = b.center.v / r;
    let h1 = a.plane_offset() / r;
    let h2 = b.plane_offset() / r;
    let g = n1.dot(&n2);
    let cross = n1.cross(&n2);
    let s2 = cross.norm_squared();
    if s2 < 1e-24 {
        let same = if g > 0.0 {
            (h1 - h2).abs() <= 1e-12 * r
        } else {
            (h1 + h2).abs() <= 1e-12 * r
        };
        return if same {
            Err(GeomError::CoincidentCircles)
        } else {
            Ok(Vec::new())
        };
    }
    let alpha = (h1 - h2 * g) / s2;
    let beta = (h2 - h1 * g) / s2;
    let p0 = n1 * alpha + n2 * beta;
    let disc = (r * r - p0.norm_squared()) / (r * r);
    if disc.abs() <= disc_tol {
        let v = p0 * (r / p0.norm());
        return Ok(vec![SpherePoint::new_unchecked(r, v)]);
    }
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    let t = (disc * r * r / s2).sqrt();
    Ok(vec![
        SpherePoint::new_unchecked(r, p0 + cross * t),
        SpherePoint::new_unchecked(r, p0 - cross * t),
    ])
}

/// Sphere points at unit chord from both `x` and `z`.
pub fn unit_pair_neighbors(
    x: &SpherePoint,
    z: &SpherePoint,
    p: &SphereParams,
) -> Result<Vec<SpherePoint>, GeomError> {
    if x.chord(z) == 0.0 {
        return Err(GeomError::DegenerateInput("x and z coincide".into()));
    }
    if x.chord(z) > 2.0 {
        return Ok(Vec::new());
    }
    circle_intersection(&neighbor_circle(x, p), &neighbor_circle(z, p))
}

/// Smallest closed cap containing every point, found by enumerating the
/// one-, two- and three-point supports of the minimax center.
pub fn enclosing_cap(points: &[SpherePoint]) -> Result<Cap, GeomError> {
    let first = points
        .first()
        .ok_or_else(|| GeomError::DegenerateInput("empty point set".into()))?;
    for q in &points[1..] {
        check_same_sphere(first, q)?;
    }
    let r = first.r;
    let radius_from = |c: &Vec3| {
        points
            .iter()
            .map(|q| (c - q.v).norm())
            .fold(0.0_f64, f64::max)
    };
    let mut best_center = first.v;
    let mut best = radius_from(&best_center);
    let mut consider = |c: Vec3| {
        let n = c.norm();
        if n < 1e-12 * r {
            return;
        }
        let c = c * (r / n);
        let rad = radius_from(&c);
        if rad < best {
            best = rad;
            best_center = c;
        }
    };
    let n = points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            consider(points[i].v + points[j].v);
            for k in (j + 1)..n {
                let normal = (points[j].v - points[i].v).cross(&(points[k].v - points[i].v));
                consider(normal);
                consider(-normal);
            }
        }
    }
    Ok(Cap {
        center: SpherePoint::new_unchecked(r, best_center),
        chordal_radius: best,
        boundary: Boundary::Closed,
    })
}

fn check_same_sphere(a: &SpherePoint, b: &SpherePoint) -> Result<(), GeomError> {
    if (a.r - b.r).abs() > ON_SPHERE_TOL * a.r {
        return Err(GeomError::RadiusMismatch(a.r, b.r));
    }
    Ok(())
}
