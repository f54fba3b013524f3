//! Core numerics for training and evaluating tutoring policies on simulated
//! learners.
//!
//! A learner is a point in `[0,1]^D` (one coordinate per latent skill) that
//! moves toward mastery as teaching materials are applied. This crate holds
//! the pieces needed to discover good teaching policies on that model: the
//! stochastic learner environment itself, a small dense neural network with
//! Adam written from scratch, a deep Q-learning agent, a learned dynamics
//! model for planning without real learners, and the evaluation metrics used
//! to compare policies.
//!
//! Everything here is deterministic given a seed: randomness flows through
//! explicitly passed [`rng::RngStream`] values and float math goes through
//! `libm`, so results are bit-identical across platforms. The crate is
//! `no_std` (with `alloc`); file formats, plots, and the command-line front
//! end live in the companion `adalearn-cli` crate.

#![no_std]
#![forbid(unsafe_code)]
// Validation sites use `!(x > 0.0)` instead of `x <= 0.0` on purpose: the
// negated form also rejects NaN, so a poisoned input cannot slip past a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod config;
pub mod dqn;
pub mod dynamics;
pub mod env;
pub mod error;
pub mod eval;
pub mod learner;
pub mod net;
pub mod policy;
pub mod rng;
pub mod types;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use rng::RngStream;
pub use types::{EpisodeLog, LatentState, MaterialAction, Transition};
