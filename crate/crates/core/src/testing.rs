//! Test support: finite-difference oracles and seeded random draws.
//!
//! These helpers back the derivative checks and must stay independent of
//! the closed-form production paths they verify.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::AugmentedPoint;

/// Central finite difference of a scalar function of one variable.
pub fn finite_diff_grad(f: impl Fn(f64) -> f64, at: f64, eps: f64) -> f64 {
    (f(at + eps) - f(at - eps)) / (2.0 * eps)
}

/// Seeded random vector with entries in [-1, 1].
pub fn rand_vec(len: usize, seed: u64) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(len, |_, _| rng.gen_range(-1.0..=1.0))
}

/// Seeded random augmented point with x in [-1, 1]^d and z = ±1.
pub fn rand_point(d: usize, seed: u64) -> AugmentedPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..=1.0));
    let z = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    AugmentedPoint::new(x, z)
}
