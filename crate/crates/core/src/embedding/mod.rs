//! Unit-distance embeddings of the pendant-cycle graphs `G_k` on `S²(r)` and
//! their rigidity.
//!
//! An embedding of `G_k` (odd cycle of length `m = 2k+1` with one leaf per
//! cycle vertex) is a pair `(X, Y)` of `m`-point lists: `y_i` are the cycle
//! vertices, `x_i` the leaves. It solves the `3m` equations
//!
//! ```text
//! ‖y_i‖² − r² = 0                    i = 1..m
//! ‖y_i − y_{i+1}‖² − 1 = 0           i = 1..m (indices mod m)
//! ‖x_i − y_i‖² − 1 = 0               i = 1..m
//! ```
//!
//! When the `3m × 3m` Jacobian in `Y` is nonsingular, every small motion of the
//! leaves can be followed by the cycle (implicit function theorem), which is
//! what [`newton_solve_y`] and [`stability_probe`] realize numerically.

mod search;

pub use search::{
    embed_graph, embed_graph_in_window, min_radius_search, EmbedOptions, GraphEmbedding,
    MinRadiusOptions, MinRadiusReport,
};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampling::{rng_stream, uniform_in_ball};
use crate::sphere_geom::{GeomError, SphereParams, Vec3};
use crate::udgraph::{gen_pendant_cycle, EmbeddedGraph, GraphError};

/// Pivot magnitude below which an LU factorization is treated as singular.
pub const PIVOT_TOL: f64 = 1e-13;
/// Threshold on `|V + V′|` for the rigidity certificate.
pub const V_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("radius {r} outside the admissible range ({lo}, {hi})")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },
    #[error(
        "winding {winding} of the {m}-cycle needs circumradius {circumradius} < r = {r}; \
         smallest feasible k at this radius is {}",
        .smallest_feasible_k.map_or_else(|| "none".to_string(), |k| k.to_string())
    )]
    InfeasibleWinding {
        k: usize,
        m: usize,
        winding: usize,
        circumradius: f64,
        r: f64,
        smallest_feasible_k: Option<usize>,
    },
    #[error("pendant vertices cannot reach unit distance (1 − 4h² = {0})")]
    InfeasiblePendant(f64),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("singular Jacobian at iteration {iteration} (pivot {pivot:e})")]
    SingularJacobian { iteration: usize, pivot: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("no embedding found; best residual {best_residual:e}")]
    NoEmbeddingFound { best_residual: f64 },
    #[error("no feasible radius found in [{lo}, {hi}]")]
    NoFeasibleRadius { lo: f64, hi: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Cycle vertices `y` and pendant vertices `x` of a `G_k` embedding. The
/// pendant vertices may leave the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VarsRepr", into = "VarsRepr")]
pub struct EmbeddingVars {
    x: Vec<Vec3>,
    y: Vec<Vec3>,
}

#[derive(Serialize, Deserialize)]
struct VarsRepr {
    x: Vec<[f64; 3]>,
    y: Vec<[f64; 3]>,
}

impl TryFrom<VarsRepr> for EmbeddingVars {
    type Error = EmbedError;
    fn try_from(repr: VarsRepr) -> Result<Self, EmbedError> {
        EmbeddingVars::new(
            repr.x.into_iter().map(Vec3::from).collect(),
            repr.y.into_iter().map(Vec3::from).collect(),
        )
    }
}

impl From<EmbeddingVars> for VarsRepr {
    fn from(v: EmbeddingVars) -> Self {
        let arr = |p: &Vec3| [p.x, p.y, p.z];
        VarsRepr {
            x: v.x.iter().map(arr).collect(),
            y: v.y.iter().map(arr).collect(),
        }
    }
}

impl EmbeddingVars {
    pub fn new(x: Vec<Vec3>, y: Vec<Vec3>) -> Result<Self, EmbedError> {
        let m = y.len();
        if x.len() != m {
            return Err(EmbedError::Malformed(format!(
                "{} pendant points for a {m}-cycle",
                x.len()
            )));
        }
        if m < 3 || m.is_multiple_of(2) {
            return Err(EmbedError::Malformed(format!(
                "cycle length {m} must be odd and at least 3"
            )));
        }
        if x.iter().chain(&y).any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(EmbedError::Malformed("non-finite coordinate".into()));
        }
        Ok(EmbeddingVars { x, y })
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }

    pub fn k(&self) -> usize {
        (self.m() - 1) / 2
    }

    pub fn x(&self) -> &[Vec3] {
        &self.x
    }

    pub fn y(&self) -> &[Vec3] {
        &self.y
    }

    /// Splits an embedded pendant cycle labeled as by
    /// [`gen_pendant_cycle`](crate::udgraph::gen_pendant_cycle).
    pub fn from_embedded(e: &EmbeddedGraph) -> Result<Self, EmbedError> {
        let n = e.graph().n();
        if !n.is_multiple_of(2) || n < 6 {
            return Err(EmbedError::Malformed(format!(
                "{n} vertices cannot form a pendant cycle"
            )));
        }
        let m = n / 2;
        let mut expected = gen_pendant_cycle((m - 1) / 2).edges().to_vec();
        let mut got = e.graph().edges().to_vec();
        expected.sort_unstable();
        got.sort_unstable();
        if m.is_multiple_of(2) || expected != got {
            return Err(EmbedError::Malformed(
                "graph is not a pendant cycle in standard labeling".into(),
            ));
        }
        let pts: Vec<Vec3> = e.points().iter().map(|p| *p.v()).collect();
        EmbeddingVars::new(pts[m..].to_vec(), pts[..m].to_vec())
    }

    /// Embedded pendant cycle; fails unless every point lies on `S²(r)`.
    pub fn to_embedded(&self, r: f64, unit_tol: f64) -> Result<EmbeddedGraph, EmbedError> {
        let params = SphereParams::new(r)?;
        let points = self
            .y
            .iter()
            .chain(&self.x)
            .map(|v| params.point(*v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EmbeddedGraph::new(
            gen_pendant_cycle(self.k()),
            points,
            unit_tol,
        )?)
    }

    fn flat_x(&self) -> Vec<f64> {
        self.x.iter().flat_map(|p| [p.x, p.y, p.z]).collect()
    }
}

/// Left-hand side of the embedding system, ordered as sphere constraints on
/// `y`, cycle edges (wrap edge last), then pendant edges.
pub fn residual(vars: &EmbeddingVars, r: f64) -> DVector<f64> {
    let m = vars.m();
    let (x, y) = (&vars.x, &vars.y);
    let mut f = DVector::zeros(3 * m);
    for i in 0..m {
        let j = (i + 1) % m;
        f[i] = y[i].norm_squared() - r * r;
        f[m + i] = (y[i] - y[j]).norm_squared() - 1.0;
        f[2 * m + i] = (x[i] - y[i]).norm_squared() - 1.0;
    }
    f
}

pub fn residual_norm(vars: &EmbeddingVars, r: f64) -> f64 {
    residual(vars, r).amax()
}

/// Analytic `∂residual/∂Y`; column block `i` holds the coordinates of `y_i`.
pub fn jacobian_y(vars: &EmbeddingVars, _r: f64) -> DMatrix<f64> {
    let m = vars.m();
    let (x, y) = (&vars.x, &vars.y);
    let mut jac = DMatrix::zeros(3 * m, 3 * m);
    let mut put = |row: usize, block: usize, v: Vec3| {
        for c in 0..3 {
            jac[(row, 3 * block + c)] += 2.0 * v[c];
        }
    };
    for i in 0..m {
        let j = (i + 1) % m;
        put(i, i, y[i]);
        put(m + i, i, y[i] - y[j]);
        put(m + i, j, y[j] - y[i]);
        put(2 * m + i, i, y[i] - x[i]);
    }
    jac
}

/// Circumradius of the regular `m`-gon traversed with step `2πl/m` and unit edges.
pub fn winding_circumradius(m: usize, winding: usize) -> f64 {
    1.0 / (2.0 * (PI * winding as f64 / m as f64).sin())
}

/// Least `k ≥ 1` whose default winding `l = k` has circumradius below `r`.
pub fn smallest_feasible_k(r: f64) -> Option<usize> {
    if !(r > 0.5) {
        return None;
    }
    (1..=10_000_000).find(|&k| winding_circumradius(2 * k + 1, k) < r)
}

/// Largest radius for which the closed-form construction is claimed, `√3/3`.
pub fn max_closed_form_radius() -> f64 {
    3f64.sqrt() / 3.0
}

/// Closed-form two-polygon embedding of `G_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GkEmbedding {
    pub params: SphereParams,
    pub k: usize,
    pub m: usize,
    pub winding: usize,
    pub circumradius: f64,
    pub h: f64,
    pub phi: f64,
    pub vars: EmbeddingVars,
}

impl GkEmbedding {
    pub fn r(&self) -> f64 {
        self.params.r()
    }

    pub fn to_embedded(&self, unit_tol: f64) -> Result<EmbeddedGraph, EmbedError> {
        self.vars.to_embedded(self.r(), unit_tol)
    }
}

/// Cycle vertices on the regular star polygon `y_i = (R cos θ_i, R sin θ_i, h)`
/// with `θ_i = 2πl·i/m`; pendants on the congruent polygon at height `−h`
/// rotated by `φ ∈ (0, π]` so that `‖x_i − y_i‖ = 1`.
pub fn closed_form_gk(r: f64, k: usize, winding: Option<usize>) -> Result<GkEmbedding, EmbedError> {
    let hi = max_closed_form_radius();
    if !(r > 0.5 && r < hi) {
        return Err(EmbedError::RadiusOutOfRange { r, lo: 0.5, hi });
    }
    if k == 0 {
        return Err(EmbedError::Malformed("k must be at least 1".into()));
    }
    let m = 2 * k + 1;
    let l = winding.unwrap_or(k);
    if l == 0 || l >= m || gcd(l, m) != 1 {
        return Err(EmbedError::Malformed(format!(
            "winding {l} must be coprime to {m} and in 1..{m}"
        )));
    }
    let params = SphereParams::new(r)?;
    let circumradius = winding_circumradius(m, l);
    if circumradius >= r {
        return Err(EmbedError::InfeasibleWinding {
            k,
            m,
            winding: l,
            circumradius,
            r,
            smallest_feasible_k: smallest_feasible_k(r),
        });
    }
    let h = (r * r - circumradius * circumradius).sqrt();
    let slack = 1.0 - 4.0 * h * h;
    if slack < 0.0 {
        return Err(EmbedError::InfeasiblePendant(slack));
    }
    let cos_phi = 1.0 - slack / (2.0 * circumradius * circumradius);
    let phi = cos_phi.clamp(-1.0, 1.0).acos();
    let (mut x, mut y) = (Vec::with_capacity(m), Vec::with_capacity(m));
    for i in 0..m {
        let theta = 2.0 * PI * ((l * i) % m) as f64 / m as f64;
        y.push(Vec3::new(
            circumradius * theta.cos(),
            circumradius * theta.sin(),
            h,
        ));
        x.push(Vec3::new(
            circumradius * (theta + phi).cos(),
            circumradius * (theta + phi).sin(),
            -h,
        ));
    }
    Ok(GkEmbedding {
        params,
        k,
        m,
        winding: l,
        circumradius,
        h,
        phi,
        vars: EmbeddingVars::new(x, y)?,
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn det_rows(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    Matrix3::from_rows(&[a.transpose(), b.transpose(), c.transpose()]).determinant()
}

/// `V_i = −det[y_i; y_{i+1}; x_i]` and `V′_i = det[y_i; y_{i+1}; x_{i+1}]`.
pub fn v_values(vars: &EmbeddingVars) -> (Vec<f64>, Vec<f64>) {
    let m = vars.m();
    let (x, y) = (&vars.x, &vars.y);
    (0..m)
        .map(|i| {
            let j = (i + 1) % m;
            (
                -det_rows(&y[i], &y[j], &x[i]),
                det_rows(&y[i], &y[j], &x[j]),
            )
        })
        .unzip()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetFactorization {
    pub det_numeric: f64,
    pub det_closed_form: f64,
    pub relative_error: f64,
}

/// Determinant of the `Y`-Jacobian from LU against `2^{3m}(∏V_i + ∏V′_i)`.
///
/// The products equal `V^m + V′^m` on symmetric embeddings. Magnitudes are
/// compared because the row reordering behind the factorization can flip sign.
pub fn det_factorization_check(vars: &EmbeddingVars, r: f64) -> DetFactorization {
    let m = vars.m();
    let det_numeric = jacobian_y(vars, r).lu().determinant();
    let (v, vp) = v_values(vars);
    let det_closed_form =
        2f64.powi(3 * m as i32) * (v.iter().product::<f64>() + vp.iter().product::<f64>());
    let scale = det_numeric.abs().max(det_closed_form.abs());
    let relative_error = if scale == 0.0 {
        0.0
    } else {
        (det_numeric.abs() - det_closed_form.abs()).abs() / scale
    };
    DetFactorization {
        det_numeric,
        det_closed_form,
        relative_error,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub v: f64,
    pub v_prime: f64,
    /// Largest deviation among the `V_i` (and among the `V′_i`) from the first one.
    pub v_spread: f64,
    pub v_plus_vp: f64,
    pub det_abs: f64,
    pub min_pivot: f64,
    /// `Some(h)` for closed-form embeddings, checked against `1/(2√3)`.
    pub h: Option<f64>,
    pub certified: bool,
}

/// Nondegeneracy certificate for arbitrary `(X, Y)`.
///
/// For symmetric embeddings (all `V_i` equal, all `V′_i` equal) and odd `m`,
/// `V^m + V′^m ≠ 0` exactly when `V + V′ ≠ 0`, so the symmetric check is on
/// `|V + V′|`; otherwise the LU pivots decide alone.
pub fn certify_vars(vars: &EmbeddingVars, r: f64) -> RigidityCertificate {
    let (v, vp) = v_values(vars);
    let spread = v
        .iter()
        .map(|a| (a - v[0]).abs())
        .chain(vp.iter().map(|a| (a - vp[0]).abs()))
        .fold(0.0, f64::max);
    let lu = jacobian_y(vars, r).lu();
    let u = lu.u();
    let min_pivot = u
        .diagonal()
        .iter()
        .map(|d| d.abs())
        .fold(f64::INFINITY, f64::min);
    let det_abs = lu.determinant().abs();
    let symmetric = spread <= 1e-9;
    let v_plus_vp = v[0] + vp[0];
    let certified =
        min_pivot > PIVOT_TOL && det_abs > 0.0 && (!symmetric || v_plus_vp.abs() > V_SUM_TOL);
    RigidityCertificate {
        v: v[0],
        v_prime: vp[0],
        v_spread: spread,
        v_plus_vp,
        det_abs,
        min_pivot,
        h: None,
        certified,
    }
}

pub fn rigidity_certificate(emb: &GkEmbedding) -> RigidityCertificate {
    let mut cert = certify_vars(&emb.vars, emb.r());
    let h_ok = emb.h < 1.0 / (2.0 * 3f64.sqrt());
    cert.h = Some(emb.h);
    cert.certified &= h_ok && cert.v_spread <= 1e-9 && cert.v_plus_vp.abs() > V_SUM_TOL;
    cert
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 50,
        }
    }
}

/// Outcome of a converged solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport<S> {
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    pub residual_history: Vec<f64>,
    pub solution: S,
}

/// Newton's method in `Y` with the pendants held at `x_perturbed`.
///
/// Only returns `Ok` once the max-abs residual is at most `opts.tol`.
pub fn newton_solve_y(
    x_perturbed: &[Vec3],
    y_init: &[Vec3],
    r: f64,
    opts: NewtonOptions,
) -> Result<SolveReport<EmbeddingVars>, EmbedError> {
    let mut vars = EmbeddingVars::new(x_perturbed.to_vec(), y_init.to_vec())?;
    let m = vars.m();
    let mut history = Vec::new();
    for iteration in 0..=opts.max_iter {
        let f = residual(&vars, r);
        let norm = f.amax();
        history.push(norm);
        if norm <= opts.tol {
            return Ok(SolveReport {
                converged: true,
                iterations: iteration,
                residual_norm: norm,
                residual_history: history,
                solution: vars,
            });
        }
        if iteration == opts.max_iter || !norm.is_finite() {
            return Err(EmbedError::NoConvergence {
                iterations: iteration,
                residual: norm,
            });
        }
        let lu = jacobian_y(&vars, r).lu();
        let pivot = lu
            .u()
            .diagonal()
            .iter()
            .map(|d| d.abs())
            .fold(f64::INFINITY, f64::min);
        if !(pivot > PIVOT_TOL) {
            return Err(EmbedError::SingularJacobian { iteration, pivot });
        }
        let step = lu
            .solve(&(-f))
            .ok_or(EmbedError::SingularJacobian { iteration, pivot })?;
        for i in 0..m {
            vars.y[i] += Vec3::new(step[3 * i], step[3 * i + 1], step[3 * i + 2]);
        }
    }
    unreachable!("loop returns on its last iteration")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub eta: f64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Largest final residual among converged trials.
    pub max_residual: f64,
    pub max_iterations: usize,
    /// Largest `‖Ỹ − Y‖` among converged trials.
    pub max_y_shift: f64,
}

/// Perturbs the pendants uniformly inside the `eta`-ball of `R^{3m}` and asks
/// Newton to recover the cycle, once per trial.
pub fn stability_probe(
    emb: &GkEmbedding,
    eta: f64,
    trials: usize,
    seed: u64,
    opts: NewtonOptions,
) -> StabilityReport {
    stability_probe_vars(&emb.vars, emb.r(), eta, trials, seed, opts)
}

pub fn stability_probe_vars(
    vars: &EmbeddingVars,
    r: f64,
    eta: f64,
    trials: usize,
    seed: u64,
    opts: NewtonOptions,
) -> StabilityReport {
    let m = vars.m();
    let base = vars.flat_x();
    let outcomes: Vec<Option<(f64, usize, f64)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_stream(seed, t as u64);
            let delta = uniform_in_ball(&mut rng, 3 * m, eta);
            let x: Vec<Vec3> = (0..m)
                .map(|i| {
                    Vec3::new(
                        base[3 * i] + delta[3 * i],
                        base[3 * i + 1] + delta[3 * i + 1],
                        base[3 * i + 2] + delta[3 * i + 2],
                    )
                })
                .collect();
            newton_solve_y(&x, &vars.y, r, opts).ok().map(|rep| {
                let shift = rep
                    .solution
                    .y
                    .iter()
                    .zip(&vars.y)
                    .map(|(a, b)| (a - b).norm_squared())
                    .sum::<f64>()
                    .sqrt();
                (rep.residual_norm, rep.iterations, shift)
            })
        })
        .collect();
    let ok: Vec<_> = outcomes.iter().flatten().collect();
    StabilityReport {
        eta,
        trials,
        successes: ok.len(),
        success_rate: if trials == 0 {
            1.0
        } else {
            ok.len() as f64 / trials as f64
        },
        max_residual: ok.iter().map(|o| o.0).fold(0.0, f64::max),
        max_iterations: ok.iter().map(|o| o.1).max().unwrap_or(0),
        max_y_shift: ok.iter().map(|o| o.2).fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_geom::rotation_about_z;

    #[test]
    fn closed_form_g2_at_055() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        assert!((e.circumradius - 0.5257311).abs() < 1e-7);
        assert!((e.h - 0.1615759).abs() < 1e-7);
        assert!((e.phi - 2.2396747).abs() < 1e-7);
        assert!(residual_norm(&e.vars, 0.55) <= 1e-12);
        assert!(e.h < 1.0 / (2.0 * 3f64.sqrt()));
        for x in e.vars.x() {
            assert!((x.norm() - 0.55).abs() < 1e-15);
        }
    }

    #[test]
    fn infeasible_winding_reports_smallest_k() {
        match closed_form_gk(0.52, 2, None) {
            Err(EmbedError::InfeasibleWinding {
                circumradius,
                smallest_feasible_k,
                ..
            }) => {
                assert!(circumradius > 0.52);
                assert_eq!(smallest_feasible_k, Some(3));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(closed_form_gk(0.52, 3, None).is_ok());
    }

    #[test]
    fn triangle_limit() {
        assert!((winding_circumradius(3, 1) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        // R = 1/√3 equals the upper end of the radius window, so k = 1 never fits
        assert!(matches!(
            closed_form_gk(max_closed_form_radius() - 1e-9, 1, None),
            Err(EmbedError::InfeasibleWinding { .. })
        ));
        let r: f64 = max_closed_form_radius() - 1e-12;
        let rr = winding_circumradius(3, 1);
        assert!((r * r - rr * rr).max(0.0).sqrt() < 2e-6);
    }

    #[test]
    fn radius_window_enforced() {
        assert!(matches!(
            closed_form_gk(0.6, 5, None),
            Err(EmbedError::RadiusOutOfRange { .. })
        ));
        assert!(matches!(
            closed_form_gk(0.55, 2, Some(5)),
            Err(EmbedError::Malformed(_))
        ));
    }

    #[test]
    fn residual_examples() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        let mut y = e.vars.y().to_vec();
        let scaled: Vec<Vec3> = y.iter().map(|p| p * 2.0).collect();
        let f = residual(
            &EmbeddingVars::new(e.vars.x().to_vec(), scaled).unwrap(),
            0.55,
        );
        for i in 0..5 {
            assert!((f[i] - 3.0 * 0.55 * 0.55).abs() < 1e-14);
        }
        // antipodal y_1 stays on the sphere with chord 2r = 1.1 to y_0
        y[1] = -y[0];
        let f = residual(&EmbeddingVars::new(e.vars.x().to_vec(), y).unwrap(), 0.55);
        assert!((f[5] - 0.21).abs() < 1e-12);
        assert!(f[0].abs() < 1e-15 && f[1].abs() < 1e-15);
    }

    #[test]
    fn jacobian_row_structure() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        let j = jacobian_y(&e.vars, 0.55);
        for i in 0..5 {
            for col in 0..15 {
                let expect = if col / 3 == i {
                    2.0 * e.vars.y()[i][col % 3]
                } else {
                    0.0
                };
                assert_eq!(j[(i, col)], expect);
            }
        }
    }

    #[test]
    fn v_values_constant_on_closed_form() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        let (v, vp) = v_values(&e.vars);
        for i in 0..5 {
            assert!((v[i] - v[0]).abs() <= 1e-12);
            assert!((vp[i] - vp[0]).abs() <= 1e-12);
        }
    }

    #[test]
    fn v_values_vanish_for_planar_configuration() {
        let y: Vec<Vec3> = (0..5)
            .map(|i| Vec3::new(i as f64, 1.0 + i as f64, 0.0))
            .collect();
        let x: Vec<Vec3> = (0..5).map(|i| Vec3::new(1.0, -(i as f64), 0.0)).collect();
        let (v, vp) = v_values(&EmbeddingVars::new(x, y).unwrap());
        assert!(v.iter().chain(&vp).all(|a| a.abs() < 1e-15));
    }

    #[test]
    fn certificate_on_closed_form_and_mirror_fake() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        let cert = rigidity_certificate(&e);
        assert!(cert.certified, "{cert:?}");
        assert!(cert.v_plus_vp.abs() > 1e-10);
        let fake = EmbeddingVars::new(e.vars.y().iter().map(|p| -p).collect(), e.vars.y().to_vec())
            .unwrap();
        let c = certify_vars(&fake, 0.55);
        assert!(c.v_plus_vp.abs() < 1e-12);
        assert!(!c.certified);
    }

    #[test]
    fn odd_power_cancellation() {
        // V = −V′ forces V^m + V′^m = 0 for odd m
        let v: f64 = 0.37;
        let vp = -v;
        assert_eq!(v.powi(5) + vp.powi(5), 0.0);
    }

    #[test]
    fn newton_at_root_takes_no_step() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        let rep = newton_solve_y(e.vars.x(), e.vars.y(), 0.55, NewtonOptions::default()).unwrap();
        assert!(rep.iterations <= 1);
        assert!(rep.converged);
    }

    #[test]
    fn newton_far_perturbation_honours_contract() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        let x: Vec<Vec3> = e
            .vars
            .x()
            .iter()
            .map(|p| p + Vec3::new(0.5, -0.3, 0.2))
            .collect();
        match newton_solve_y(&x, e.vars.y(), 0.55, NewtonOptions::default()) {
            Ok(rep) => assert!(rep.residual_norm <= 1e-12),
            Err(EmbedError::NoConvergence { .. } | EmbedError::SingularJacobian { .. }) => {}
            Err(other) => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stability_with_zero_eta() {
        let e = closed_form_gk(0.55, 2, None).unwrap();
        let rep = stability_probe(&e, 0.0, 10, 1, NewtonOptions::default());
        assert_eq!(rep.success_rate, 1.0);
    }

    #[test]
    fn rotation_maps_embedding_to_itself() {
        for &(r, k) in &[(0.55, 2), (0.56, 4), (0.53, 6)] {
            let e = closed_form_gk(r, k, None).unwrap();
            let rot = rotation_about_z(2.0 * PI * e.winding as f64 / e.m as f64);
            for i in 0..e.m {
                let j = (i + 1) % e.m;
                assert!((rot * e.vars.y()[i] - e.vars.y()[j]).norm() < 1e-12);
                assert!((rot * e.vars.x()[i] - e.vars.x()[j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn embedded_round_trip() {
        let e = closed_form_gk(0.55, 3, None).unwrap();
        let g = e.to_embedded(1e-9).unwrap();
        let back = EmbeddingVars::from_embedded(&g).unwrap();
        assert_eq!(back, e.vars);
    }
}
