//! Experiment configuration and validation.

use crate::error::{Error, Result};
use crate::learner::KernelParams;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Every tunable of the simulations, with the defaults the experiments use.
///
/// A config travels as one value through training, evaluation, and model
/// fitting so that a run is fully described by it plus the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Number of latent traits per learner.
    pub dim: usize,
    /// Number of teaching materials.
    pub n_actions: usize,
    /// Discount factor.
    pub gamma: f64,
    /// Adam learning rate for the Q-network.
    pub alpha: f64,
    /// Exploration rate at step 0.
    pub eps_high: f64,
    /// Exploration rate floor.
    pub eps_low: f64,
    /// Steps over which exploration decays from `eps_high` to `eps_low`.
    pub tau_eps: u64,
    /// Transitions sampled from replay per update.
    pub minibatch: usize,
    /// Episodes per training run.
    pub episodes: u32,
    /// Hard cap on steps per episode; hitting it truncates without a
    /// terminal flag.
    pub max_episode_steps: u32,
    /// Sup-norm band around full mastery that ends an episode.
    pub termination_tol: f64,
    /// Standard deviation of Gaussian observation noise on each trait.
    pub noise_sigma: f64,
    /// Replay memory capacity in transitions; 0 keeps everything.
    pub replay_capacity: usize,
    /// Hidden layer widths of the Q-network.
    pub q_hidden: Vec<usize>,
    /// Hidden layer widths of the dynamics estimator.
    pub estimator_hidden: Vec<usize>,
    /// Master seed; every stream of an experiment derives from it.
    pub seed: u64,
    /// Adam first-moment decay.
    pub adam_beta1: f64,
    /// Adam second-moment decay.
    pub adam_beta2: f64,
    /// Adam denominator guard.
    pub adam_epsilon: f64,
    /// Updates between copies of the Q-network into a bootstrap target
    /// network; 0 disables the target network and bootstraps from the
    /// network being trained (the default).
    pub target_sync_period: u32,
    /// Coefficients of the learner transition kernel.
    pub kernel: KernelParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dim: 2,
            n_actions: 3,
            gamma: 0.9,
            alpha: 6e-4,
            eps_high: 1.0,
            eps_low: 0.1,
            tau_eps: 2000,
            minibatch: 256,
            episodes: 2000,
            max_episode_steps: 200,
            termination_tol: 1e-3,
            noise_sigma: 0.0,
            replay_capacity: 0,
            q_hidden: vec![64, 32],
            estimator_hidden: vec![32],
            seed: 42,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            target_sync_period: 0,
            kernel: KernelParams::default(),
        }
    }
}

impl ExperimentConfig {
    /// Checks every field, reporting the first offending one by name.
    pub fn validate(&self) -> Result<()> {
        fn bad(field: &'static str, reason: alloc::string::String) -> Result<()> {
            Err(Error::InvalidConfig { field, reason })
        }
        if self.dim < 1 {
            return bad("d", format!("need at least one trait, got {}", self.dim));
        }
        if self.n_actions < 1 {
            return bad("l", format!("need at least one material, got {}", self.n_actions));
        }
        if !self.gamma.is_finite() || !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma", format!("must lie in [0, 1), got {}", self.gamma));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return bad("alpha", format!("must be positive, got {}", self.alpha));
        }
        if !self.eps_high.is_finite() || !(0.0..=1.0).contains(&self.eps_high) {
            return bad("eps_high", format!("must lie in [0, 1], got {}", self.eps_high));
        }
        if !self.eps_low.is_finite() || !(0.0..=1.0).contains(&self.eps_low) {
            return bad("eps_low", format!("must lie in [0, 1], got {}", self.eps_low));
        }
        if self.eps_low > self.eps_high {
            return bad(
                "eps_low",
                format!("must not exceed eps_high ({} > {})", self.eps_low, self.eps_high),
            );
        }
        if self.tau_eps < 1 {
            return bad("tau_eps", "must be at least 1".into());
        }
        if self.minibatch < 1 {
            return bad("minibatch_m", "must be at least 1".into());
        }
        if self.max_episode_steps < 1 {
            return bad("max_episode_steps", "must be at least 1".into());
        }
        if !(self.termination_tol > 0.0) || !self.termination_tol.is_finite() {
            return bad(
                "termination_tol",
                format!("must be positive, got {}", self.termination_tol),
            );
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return bad(
                "noise_sigma",
                format!("must be finite and >= 0, got {}", self.noise_sigma),
            );
        }
        for (i, &w) in self.q_hidden.iter().enumerate() {
            if w < 1 {
                return bad("q_hidden_sizes", format!("layer {i} must have width >= 1"));
            }
        }
        for (i, &w) in self.estimator_hidden.iter().enumerate() {
            if w < 1 {
                return bad(
                    "estimator_hidden_sizes",
                    format!("layer {i} must have width >= 1"),
                );
            }
        }
        if !self.adam_beta1.is_finite() || !(0.0..1.0).contains(&self.adam_beta1) {
            return bad("adam_beta1", format!("must lie in [0, 1), got {}", self.adam_beta1));
        }
        if !self.adam_beta2.is_finite() || !(0.0..1.0).contains(&self.adam_beta2) {
            return bad("adam_beta2", format!("must lie in [0, 1), got {}", self.adam_beta2));
        }
        if !(self.adam_epsilon > 0.0) || !self.adam_epsilon.is_finite() {
            return bad(
                "adam_epsilon",
                format!("must be positive, got {}", self.adam_epsilon),
            );
        }
        self.kernel.validate()?;
        Ok(())
    }

    /// Layer sizes of the Q-network: traits in, one value per material out.
    pub fn q_layer_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::with_capacity(self.q_hidden.len() + 2);
        sizes.push(self.dim);
        sizes.extend_from_slice(&self.q_hidden);
        sizes.push(self.n_actions);
        sizes
    }

    /// Layer sizes of the dynamics estimator: state plus one-hot action in,
    /// next state out.
    pub fn estimator_layer_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::with_capacity(self.estimator_hidden.len() + 2);
        sizes.push(self.dim + self.n_actions);
        sizes.extend_from_slice(&self.estimator_hidden);
        sizes.push(self.dim);
        sizes
    }
}
