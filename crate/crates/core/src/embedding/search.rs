//! Unit-distance embeddings of arbitrary graphs by multi-start damped
//! Gauss–Newton (Levenberg–Marquardt), and the minimal-radius search built on
//! top of it.
//!
//! Unknowns are the vertex coordinates, plus the sphere radius in the
//! free-radius variant. Residuals are `‖p_i‖² − r²` for every vertex followed by
//! `‖p_i − p_j‖² − 1` for every edge.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EmbedError, SolveReport};
use crate::sampling::{rng_stream, uniform_on_sphere};
use crate::sphere_geom::{SphereParams, Vec3};
use crate::udgraph::{EmbeddedGraph, Graph, DEFAULT_UNIT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedOptions {
    pub starts: usize,
    pub seed: u64,
    /// Max-abs residual accepted as an embedding.
    pub tol: f64,
    pub max_iter: usize,
    /// Smallest chord allowed between two distinct vertices.
    pub min_separation: f64,
    /// Starts run per parallel batch; the search stops after the first batch
    /// containing a success.
    pub batch: usize,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            starts: 32,
            seed: 0,
            tol: 1e-10,
            max_iter: 300,
            min_separation: 1e-6,
            batch: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEmbedding {
    pub embedding: EmbeddedGraph,
    pub start: usize,
    pub min_separation: f64,
}

/// Result of one local solve.
#[derive(Debug, Clone)]
struct Attempt {
    start: usize,
    r: f64,
    points: Vec<Vec3>,
    residual: f64,
    iterations: usize,
    history: Vec<f64>,
    separation: f64,
}

impl Attempt {
    fn succeeded(&self, opts: &EmbedOptions) -> bool {
        self.residual <= opts.tol && self.separation >= opts.min_separation
    }

    fn into_report(self, g: &Graph) -> Result<SolveReport<GraphEmbedding>, EmbedError> {
        let params = SphereParams::new(self.r)?;
        let points = self
            .points
            .iter()
            .map(|v| params.project(*v))
            .collect::<Result<Vec<_>, _>>()?;
        let embedding = EmbeddedGraph::new(g.clone(), points, DEFAULT_UNIT_TOL)?;
        Ok(SolveReport {
            converged: true,
            iterations: self.iterations,
            residual_norm: self.residual,
            residual_history: self.history,
            solution: GraphEmbedding {
                embedding,
                start: self.start,
                min_separation: self.separation,
            },
        })
    }
}

enum Radius {
    Fixed(f64),
    Free,
}

struct Problem<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    radius: Radius,
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        3 * self.n + matches!(self.radius, Radius::Free) as usize
    }

    fn radius_of(&self, z: &DVector<f64>) -> f64 {
        match self.radius {
            Radius::Fixed(r) => r,
            Radius::Free => z[3 * self.n],
        }
    }

    fn point(z: &DVector<f64>, i: usize) -> Vec3 {
        Vec3::new(z[3 * i], z[3 * i + 1], z[3 * i + 2])
    }

    fn residual(&self, z: &DVector<f64>) -> DVector<f64> {
        let r = self.radius_of(z);
        let mut f = DVector::zeros(self.n + self.edges.len());
        for i in 0..self.n {
            f[i] = Self::point(z, i).norm_squared() - r * r;
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            f[self.n + e] = (Self::point(z, a) - Self::point(z, b)).norm_squared() - 1.0;
        }
        f
    }

    fn jacobian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.n + self.edges.len(), self.dim());
        for i in 0..self.n {
            let p = Self::point(z, i);
            for c in 0..3 {
                j[(i, 3 * i + c)] = 2.0 * p[c];
            }
            if let Radius::Free = self.radius {
                j[(i, 3 * self.n)] = -2.0 * z[3 * self.n];
            }
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let d = Self::point(z, a) - Self::point(z, b);
            for c in 0..3 {
                j[(self.n + e, 3 * a + c)] = 2.0 * d[c];
                j[(self.n + e, 3 * b + c)] = -2.0 * d[c];
            }
        }
        j
    }
}

struct LmOutcome {
    z: DVector<f64>,
    residual: f64,
    iterations: usize,
    history: Vec<f64>,
}

const LAMBDA_MIN: f64 = 1e-12;
const LAMBDA_MAX: f64 = 1e12;
const TARGET: f64 = 1e-14;

/// Levenberg–Marquardt with `λI` damping: `λ ×2` on a rejected step, `λ ÷3` on
/// an accepted one. Stops at the target residual, on stagnation, or after
/// `max_iter` accepted steps.
fn levenberg_marquardt(problem: &Problem, z0: DVector<f64>, max_iter: usize) -> LmOutcome {
    let mut z = z0;
    let mut f = problem.residual(&z);
    let mut cost = f.norm_squared();
    let mut lambda = 1e-3;
    let mut history = vec![f.amax()];
    let mut stalls = 0;
    let mut iterations = 0;
    let dim = problem.dim();
    while iterations < max_iter && f.amax() > TARGET {
        let jac = problem.jacobian(&z);
        let jt = jac.transpose();
        let normal = &jt * &jac;
        let grad = &jt * &f;
        let mut accepted = None;
        while lambda <= LAMBDA_MAX {
            let damped = &normal + DMatrix::identity(dim, dim) * lambda;
            let Some(chol) = damped.cholesky() else {
                lambda *= 2.0;
                continue;
            };
            let step = -chol.solve(&grad);
            let z_new = &z + step;
            let f_new = problem.residual(&z_new);
            let cost_new = f_new.norm_squared();
            if cost_new.is_finite() && cost_new < cost {
                lambda = (lambda / 3.0).max(LAMBDA_MIN);
                accepted = Some((z_new, f_new, cost_new));
                break;
            }
            lambda *= 2.0;
        }
        let Some((z_new, f_new, cost_new)) = accepted else {
            break;
        };
        if cost - cost_new <= 1e-12 * cost {
            stalls += 1;
        } else {
            stalls = 0;
        }
        z = z_new;
        f = f_new;
        cost = cost_new;
        iterations += 1;
        history.push(f.amax());
        if stalls >= 8 {
            break;
        }
    }
    LmOutcome {
        residual: f.amax(),
        z,
        iterations,
        history,
    }
}

fn min_separation(points: &[Vec3]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

fn random_start<R: Rng>(rng: &mut R, n: usize, params: &SphereParams) -> DVector<f64> {
    let mut z = DVector::zeros(3 * n);
    for i in 0..n {
        let p = uniform_on_sphere(rng, params);
        z.fixed_rows_mut::<3>(3 * i).copy_from(p.v());
    }
    z
}

fn fixed_radius_attempt(g: &Graph, r: f64, start: usize, opts: &EmbedOptions) -> Attempt {
    let mut rng = rng_stream(opts.seed, start as u64);
    let params = SphereParams::new(r).expect("radius checked by caller");
    let problem = Problem {
        n: g.n(),
        edges: g.edges(),
        radius: Radius::Fixed(r),
    };
    let out = levenberg_marquardt(
        &problem,
        random_start(&mut rng, g.n(), &params),
        opts.max_iter,
    );
    let points: Vec<Vec3> = (0..g.n()).map(|i| Problem::point(&out.z, i)).collect();
    Attempt {
        start,
        r,
        separation: min_separation(&points),
        points,
        residual: out.residual,
        iterations: out.iterations,
        history: out.history,
    }
}

/// Fixed-radius solve at a random radius of the window, then a free-radius
/// polish from where it stopped.
fn free_radius_attempt(g: &Graph, lo: f64, hi: f64, start: usize, opts: &EmbedOptions) -> Attempt {
    let mut rng = rng_stream(opts.seed, start as u64);
    let lo_open = lo.max(0.5 + 1e-12);
    let r0 = if hi > lo_open {
        rng.random_range(lo_open..=hi)
    } else {
        hi
    };
    let params = SphereParams::new(r0).expect("window above 1/2");
    let n = g.n();
    let fixed = Problem {
        n,
        edges: g.edges(),
        radius: Radius::Fixed(r0),
    };
    let first = levenberg_marquardt(&fixed, random_start(&mut rng, n, &params), opts.max_iter);
    let free = Problem {
        n,
        edges: g.edges(),
        radius: Radius::Free,
    };
    let mut z = DVector::zeros(3 * n + 1);
    z.rows_mut(0, 3 * n).copy_from(&first.z);
    z[3 * n] = r0;
    let second = levenberg_marquardt(&free, z, opts.max_iter);
    let r = second.z[3 * n];
    let points: Vec<Vec3> = (0..n).map(|i| Problem::point(&second.z, i)).collect();
    let mut history = first.history;
    history.extend(second.history);
    let in_window = r >= lo && r <= hi && r > 0.5;
    Attempt {
        start,
        r,
        separation: min_separation(&points),
        points,
        residual: if in_window {
            second.residual
        } else {
            f64::INFINITY
        },
        iterations: first.iterations + second.iterations,
        history,
    }
}

/// Lowest residual, ties to the lowest start index.
fn best_attempt(attempts: Vec<Attempt>, opts: &EmbedOptions) -> Option<Attempt> {
    attempts.into_iter().min_by(|a, b| {
        let key = |x: &Attempt| (!x.succeeded(opts), x.residual);
        key(a)
            .partial_cmp(&key(b))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.start.cmp(&b.start))
    })
}

fn run_batches(
    g: &Graph,
    opts: &EmbedOptions,
    attempt: impl Fn(usize) -> Attempt + Sync,
) -> Result<SolveReport<GraphEmbedding>, EmbedError> {
    let batch = opts.batch.max(1);
    let mut best: Option<Attempt> = None;
    let mut begin = 0;
    while begin < opts.starts {
        let end = (begin + batch).min(opts.starts);
        let attempts: Vec<Attempt> = (begin..end).into_par_iter().map(&attempt).collect();
        let mut pool = attempts;
        pool.extend(best.take());
        best = best_attempt(pool, opts);
        if best.as_ref().is_some_and(|a| a.succeeded(opts)) {
            break;
        }
        begin = end;
    }
    match best {
        Some(a) if a.succeeded(opts) => a.into_report(g),
        Some(a) => Err(EmbedError::NoEmbeddingFound {
            best_residual: a.residual,
        }),
        None => Err(EmbedError::NoEmbeddingFound {
            best_residual: f64::INFINITY,
        }),
    }
}

/// Embeds `g` on `S²(r)` with all edges unit, from `opts.starts` random
/// initializations. Failure is not a proof of infeasibility.
pub fn embed_graph(
    g: &Graph,
    r: f64,
    opts: &EmbedOptions,
) -> Result<SolveReport<GraphEmbedding>, EmbedError> {
    SphereParams::new(r)?;
    run_batches(g, opts, |s| fixed_radius_attempt(g, r, s, opts))
}

/// Like [`embed_graph`] but lets the radius float inside `[r_lo, r_hi]`. Needed
/// for rigid graphs that only embed at isolated radii.
pub fn embed_graph_in_window(
    g: &Graph,
    r_lo: f64,
    r_hi: f64,
    opts: &EmbedOptions,
) -> Result<SolveReport<GraphEmbedding>, EmbedError> {
    check_window(r_lo, r_hi)?;
    run_batches(g, opts, |s| free_radius_attempt(g, r_lo, r_hi, s, opts))
}

fn check_window(lo: f64, hi: f64) -> Result<(), EmbedError> {
    if !(lo < hi && hi > 0.5) {
        return Err(EmbedError::Malformed(format!(
            "radius window [{lo}, {hi}] must satisfy lo < hi and hi > 1/2"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinRadiusOptions {
    pub r_lo: f64,
    pub r_hi: f64,
    pub tol_r: f64,
    pub embed: EmbedOptions,
}

impl MinRadiusOptions {
    pub fn new(r_lo: f64, r_hi: f64) -> Self {
        MinRadiusOptions {
            r_lo,
            r_hi,
            tol_r: 1e-6,
            embed: EmbedOptions {
                starts: 200,
                ..EmbedOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinRadiusReport {
    /// Smallest radius with a certified embedding found; an upper bound on
    /// the true minimum since the search is local.
    pub r_star: f64,
    pub residual_norm: f64,
    pub witness: EmbeddedGraph,
    /// Distinct radii (rounded to 1e-9) reached by the free-radius stage.
    pub candidate_radii: Vec<f64>,
    pub bisection_steps: usize,
}

/// Smallest radius in `[r_lo, r_hi]` at which `g` has a unit-distance
/// embedding with distinct vertices.
///
/// Every start first runs a free-radius solve, which lands on isolated
/// feasible radii exactly. Fixed-radius bisection below the best such radius
/// then pushes down families whose feasible set is an interval.
pub fn min_radius_search(
    g: &Graph,
    opts: &MinRadiusOptions,
) -> Result<MinRadiusReport, EmbedError> {
    check_window(opts.r_lo, opts.r_hi)?;
    let eo = opts.embed;
    let attempts: Vec<Attempt> = (0..eo.starts)
        .into_par_iter()
        .map(|s| free_radius_attempt(g, opts.r_lo, opts.r_hi, s, &eo))
        .collect();
    let feasible: Vec<&Attempt> = attempts.iter().filter(|a| a.succeeded(&eo)).collect();
    let mut candidate_radii: Vec<f64> =
        feasible.iter().map(|a| (a.r * 1e9).round() / 1e9).collect();
    candidate_radii.sort_by(f64::total_cmp);
    candidate_radii.dedup();
    let best = feasible
        .into_iter()
        .min_by(|a, b| a.r.total_cmp(&b.r).then(a.start.cmp(&b.start)))
        .cloned()
        .ok_or(EmbedError::NoFeasibleRadius {
            lo: opts.r_lo,
            hi: opts.r_hi,
        })?;

    let mut hi = best.r;
    let mut witness = best.into_report(g)?;
    let mut lo = opts.r_lo;
    let mut steps = 0;
    while hi - lo > opts.tol_r {
        let mid = 0.5 * (lo + hi);
        steps += 1;
        if mid <= 0.5 {
            lo = mid;
            continue;
        }
        match embed_graph(g, mid, &eo) {
            Ok(rep) => {
                hi = mid;
                witness = rep;
            }
            Err(_) => lo = mid,
        }
    }
    Ok(MinRadiusReport {
        r_star: hi,
        residual_norm: witness.residual_norm,
        witness: witness.solution.embedding,
        candidate_radii,
        bisection_steps: steps,
    })
}
