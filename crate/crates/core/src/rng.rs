//! Deterministic pseudorandom streams.
//!
//! Experiments must replay bit-for-bit from a single seed, and changing one
//! consumer of randomness (say, the agent's initializer) must not shift the
//! draws seen by another (the environment). Both needs are met by giving each
//! consumer its own [`RngStream`], derived from the master seed together with
//! a [`purpose`] tag and a replicate index.
//!
//! The generator is SplitMix64: a 64-bit counter advanced by a fixed odd
//! increment and passed through a mixing function. It is tiny, passes BigCrush,
//! and its integer outputs are identical on every platform. The float
//! transforms on top (uniform, Box-Muller Gaussian, inverse-CDF Beta(1, b))
//! use `libm`, so they are bit-identical across platforms too.

use crate::error::{Error, Result};
use alloc::format;

/// Fixed odd increment of the SplitMix64 counter (the golden ratio in 64-bit
/// fixed point).
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stride used to fold the replicate index into derived seeds.
const INDEX_STRIDE: u64 = 0xC2B2_AE3D_27D4_EB4F;

/// `1 / 2^53`, the spacing of the uniform grid on `[0, 1)`.
const UNIFORM_SCALE: f64 = 1.0 / 9_007_199_254_740_992.0;

/// SplitMix64 output mixer. Bijective, so distinct inputs stay distinct.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Names for the independent randomness consumers of an experiment.
///
/// Derived streams are decorrelated by construction, but giving each consumer
/// a stable tag documents who draws what and keeps stream assignments from
/// silently colliding as the code evolves.
pub mod purpose {
    /// Learner transition draws and observation noise.
    pub const ENV: u64 = 1;
    /// Network weight initialization.
    pub const AGENT_INIT: u64 = 2;
    /// Exploration coin flips, random actions, and replay sampling during
    /// training.
    pub const EXPLORATION: u64 = 3;
    /// Dynamics-estimator data shuffling and weight initialization.
    pub const ESTIMATOR: u64 = 4;
    /// Environments and policy draws used during evaluation.
    pub const EVAL: u64 = 5;
    /// Training runs inside a fitted dynamics model.
    pub const VIRTUAL: u64 = 6;
}

/// A self-contained pseudorandom stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    /// Stream seeded directly with `seed`.
    pub fn new(seed: u64) -> Self {
        RngStream { state: seed }
    }

    /// Independent stream for (`seed`, `purpose`, `index`).
    ///
    /// Two mixing rounds separate the three inputs, so related triples (same
    /// seed, consecutive indices, ...) produce unrelated streams.
    pub fn derive(seed: u64, purpose: u64, index: u64) -> Self {
        let a = mix64(seed.wrapping_add(purpose.wrapping_mul(GOLDEN_GAMMA)));
        RngStream {
            state: mix64(a.wrapping_add(index.wrapping_mul(INDEX_STRIDE))),
        }
    }

    /// New stream seeded from this one's next output. Useful when a helper
    /// needs its own stream but the caller only holds one.
    pub fn fork(&mut self) -> Self {
        RngStream::new(self.next_u64())
    }

    /// Next raw 64-bit output.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw on `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIFORM_SCALE
    }

    /// Gaussian draw, `N(mu, sigma^2)`, via Box-Muller.
    ///
    /// Always consumes exactly two uniforms. `sigma = 0` returns `mu`
    /// exactly. Negative or non-finite `sigma` is an error.
    pub fn gaussian(&mut self, mu: f64, sigma: f64) -> Result<f64> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "gaussian sigma must be finite and >= 0, got {sigma}"
            )));
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        // 1 - u1 lies in (0, 1], so the log is finite.
        let r = libm::sqrt(-2.0 * libm::log(1.0 - u1));
        let z = r * libm::cos(2.0 * core::f64::consts::PI * u2);
        Ok(mu + sigma * z)
    }

    /// Draw from Beta(1, b) by inverting its CDF. `b` must be positive.
    pub fn beta_one_b(&mut self, b: f64) -> Result<f64> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "beta_one_b shape must be finite and > 0, got {b}"
            )));
        }
        let u = self.uniform();
        Ok(beta_one_b_inverse_cdf(u, b))
    }
}

/// Quantile function of Beta(1, b): the density is `b (1-x)^(b-1)` on
/// `[0, 1]`, the CDF is `1 - (1-x)^b`, and inverting gives
/// `x = 1 - (1-u)^(1/b)`.
///
/// Exposed so tests can drive the transform with chosen `u` values.
/// Requires `u` in `[0, 1)` and `b > 0`. The true quantile is below 1, but
/// for small `b` it can be so close that the result rounds to exactly 1.
pub fn beta_one_b_inverse_cdf(u: f64, b: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&u));
    debug_assert!(b > 0.0);
    1.0 - libm::pow(1.0 - u, 1.0 / b)
}
