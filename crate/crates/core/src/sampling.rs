//! Seeded random streams and the sphere samplers shared by the Monte-Carlo
//! and multi-start routines.
//!
//! Work is split into units (starts, trials, chunks) that each own a stream
//! derived from `(seed, unit index)`, so results do not depend on how units
//! are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::sphere_geom::{SphereParams, SpherePoint, Vec3};

/// Independent stream for work unit `index` under `seed`.
pub fn rng_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point on `S²(r)`: uniform height and uniform longitude.
pub fn uniform_on_sphere<R: Rng + ?Sized>(rng: &mut R, params: &SphereParams) -> SpherePoint {
    let r = params.r();
    let z: f64 = rng.random_range(-1.0..=1.0);
    let lon: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    SpherePoint::new_unchecked(r, Vec3::new(r * s * lon.cos(), r * s * lon.sin(), r * z))
}

/// Uniform sample from the Euclidean ball of the given radius in `dim` dimensions.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let u: f64 = rng.random();
    let scale = if norm > 0.0 {
        radius * u.powf(1.0 / dim as f64) / norm
    } else {
        0.0
    };
    v.iter_mut().for_each(|a| *a *= scale);
    v
}

/// Runs `f` on a dedicated pool of `threads` workers (`None` uses the global pool).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = rng_stream(7, 3).random();
        let b: u64 = rng_stream(7, 3).random();
        let c: u64 = rng_stream(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sphere_samples_are_on_sphere() {
        let p = SphereParams::new(0.55).unwrap();
        let mut rng = rng_stream(1, 0);
        for _ in 0..1000 {
            let x = uniform_on_sphere(&mut rng, &p);
            assert!((x.v().norm() - 0.55).abs() < 1e-14);
        }
    }

    #[test]
    fn ball_samples_respect_radius() {
        let mut rng = rng_stream(2, 0);
        for _ in 0..200 {
            let v = uniform_in_ball(&mut rng, 15, 1e-3);
            assert!(v.iter().map(|a| a * a).sum::<f64>().sqrt() <= 1e-3);
        }
    }
}
