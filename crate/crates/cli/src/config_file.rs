//! Plain `key = value` config files.
//!
//! One assignment per line; `#` starts a comment; blank lines are fine. Keys
//! are the short names below, kernel coefficients carry a `kernel.` prefix,
//! and hidden-layer lists are comma-separated. Unknown or repeated keys are
//! errors, so a typo cannot silently fall back to a default.
//!
//! ```text
//! # faster sweep for smoke tests
//! episodes_e = 50
//! q_hidden_sizes = 16,8
//! kernel.g1_a1_const = 3.0
//! ```

use adalearn_core::ExperimentConfig;
use anyhow::{anyhow, bail, Context, Result};
use std::collections::HashSet;
use std::path::Path;

/// Reads and validates a config file, starting from the defaults.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("parsing config {}", path.display()))
}

/// Applies `key = value` lines on top of the default configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`, got `{line}`"))?;
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            bail!("line {line_no}: key `{key}` was already set");
        }
        apply(&mut cfg, key, value)
            .with_context(|| format!("line {line_no}: key `{key}`"))?;
    }
    cfg.validate().map_err(|e| anyhow!("{e}"))?;
    Ok(cfg)
}

fn apply(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<()> {
    fn num<T: std::str::FromStr>(value: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        value
            .parse()
            .map_err(|e| anyhow!("cannot parse `{value}`: {e}"))
    }
    fn size_list(value: &str) -> Result<Vec<usize>> {
        value.split(',').map(|p| num::<usize>(p.trim())).collect()
    }

    let k = &mut cfg.kernel;
    match key {
        "d" => cfg.dim = num(value)?,
        "l" => cfg.n_actions = num(value)?,
        "gamma" => cfg.gamma = num(value)?,
        "alpha" => cfg.alpha = num(value)?,
        "eps_high" => cfg.eps_high = num(value)?,
        "eps_low" => cfg.eps_low = num(value)?,
        "tau_eps" => cfg.tau_eps = num(value)?,
        "minibatch_m" => cfg.minibatch = num(value)?,
        "episodes_e" => cfg.episodes = num(value)?,
        "max_episode_steps" => cfg.max_episode_steps = num(value)?,
        "termination_tol" => cfg.termination_tol = num(value)?,
        "noise_sigma" => cfg.noise_sigma = num(value)?,
        "replay_capacity" => cfg.replay_capacity = num(value)?,
        "q_hidden_sizes" => cfg.q_hidden = size_list(value)?,
        "estimator_hidden_sizes" => cfg.estimator_hidden = size_list(value)?,
        "seed" => cfg.seed = num(value)?,
        "adam_beta1" => cfg.adam_beta1 = num(value)?,
        "adam_beta2" => cfg.adam_beta2 = num(value)?,
        "adam_epsilon" => cfg.adam_epsilon = num(value)?,
        "target_sync_period" => cfg.target_sync_period = num(value)?,
        "kernel.g1_a1_const" => k.g1_a1_const = num(value)?,
        "kernel.g1_a1_theta1" => k.g1_a1_theta1 = num(value)?,
        "kernel.g1_a1_theta2" => k.g1_a1_theta2 = num(value)?,
        "kernel.g1_a3_const" => k.g1_a3_const = num(value)?,
        "kernel.g1_a3_theta1" => k.g1_a3_theta1 = num(value)?,
        "kernel.g1_a3_theta2" => k.g1_a3_theta2 = num(value)?,
        "kernel.g2_a2_const" => k.g2_a2_const = num(value)?,
        "kernel.g2_a2_theta1" => k.g2_a2_theta1 = num(value)?,
        "kernel.g2_a2_theta2" => k.g2_a2_theta2 = num(value)?,
        "kernel.g2_a3_const" => k.g2_a3_const = num(value)?,
        "kernel.g2_a3_bump" => k.g2_a3_bump = num(value)?,
        "kernel.g2_a3_center" => k.g2_a3_center = num(value)?,
        "kernel.g2_a3_width" => k.g2_a3_width = num(value)?,
        "kernel.g2_a3_theta2" => k.g2_a3_theta2 = num(value)?,
        "kernel.g2_a3_delta1" => k.g2_a3_delta1 = num(value)?,
        _ => bail!("unknown key"),
    }
    Ok(())
}
