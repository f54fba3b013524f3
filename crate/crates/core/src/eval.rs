//! Policy evaluation and reward-curve utilities.

use crate::config::ExperimentConfig;
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::learner::LearnerEnv;
use crate::policy::Policy;
use crate::rng::RngStream;
use crate::types::EpisodeLog;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Pooled result of evaluating one policy on a batch of fresh learners.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSummary {
    pub policy_name: String,
    pub n_eval_learners: u32,
    pub mean_reward: f64,
    /// Sample standard deviation (n-1 denominator); 0 for a single learner.
    pub sd_reward: f64,
    /// Per-learner episode rewards, in evaluation order.
    pub rewards: Vec<f64>,
}

/// A training run's per-episode rewards with their smoothed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardCurve {
    pub raw: Vec<f64>,
    pub smoothed: Vec<f64>,
    pub window: usize,
}

impl RewardCurve {
    pub fn new(raw: Vec<f64>, window: usize) -> Result<Self> {
        let smoothed = smooth(&raw, window)?;
        Ok(RewardCurve {
            raw,
            smoothed,
            window,
        })
    }

    pub fn from_logs(logs: &[EpisodeLog], window: usize) -> Result<Self> {
        RewardCurve::new(logs.iter().map(|l| l.total_reward).collect(), window)
    }
}

/// Trailing moving average: element `i` is the mean of the last `window`
/// values up to and including `i` (fewer at the start, where the window has
/// not filled yet).
pub fn smooth(raw: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::InvalidArgument(
            "smoothing window must be at least 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(raw.len());
    let mut running = 0.0;
    for i in 0..raw.len() {
        running += raw[i];
        if i >= window {
            running -= raw[i - window];
        }
        let len = (i + 1).min(window) as f64;
        out.push(running / len);
    }
    Ok(out)
}

/// Mean and sample standard deviation of `values` (SD is 0 for fewer than
/// two values).
pub fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}

/// Evaluates `policy` on `n` fresh simulated learners at observation noise
/// `sigma`, with no exploration: the policy alone picks every material.
///
/// Each learner runs until mastery or the config's step cap. `rng` seeds the
/// environment stream and drives any policy randomness, so a summary is
/// reproducible from its stream.
pub fn evaluate_policy<P: Policy + ?Sized>(
    policy: &P,
    n: u32,
    sigma: f64,
    config: &ExperimentConfig,
    rng: &mut RngStream,
) -> Result<EvalSummary> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "evaluation needs at least one learner".into(),
        ));
    }
    let mut cfg = config.clone();
    cfg.noise_sigma = sigma;
    let mut env = LearnerEnv::new(&cfg, rng.fork())?;
    let mut rewards = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let mut obs = env.reset()?;
        let mut total = 0.0;
        for _ in 0..cfg.max_episode_steps {
            let action = policy.select(&obs, rng);
            let step = env.step(action)?;
            total += step.reward;
            obs = step.observation;
            if step.terminal {
                break;
            }
        }
        rewards.push(total);
    }
    let (mean_reward, sd_reward) = mean_and_sd(&rewards);
    Ok(EvalSummary {
        policy_name: policy.name().to_string(),
        n_eval_learners: n,
        mean_reward,
        sd_reward,
        rewards,
    })
}
