//! Domain vocabulary: learner states, teaching actions, and the records that
//! training and evaluation produce.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// A learner's latent skill vector, one coordinate per trait, each in `[0, 1]`.
///
/// The all-ones point is full mastery; an episode ends when the state enters
/// a small sup-norm band around it.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentState {
    theta: Vec<f64>,
}

impl LatentState {
    /// Validates every coordinate into `[0, 1]`.
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidArgument(
                "latent state needs at least one trait".into(),
            ));
        }
        for (d, &t) in theta.iter().enumerate() {
            if !t.is_finite() || !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidArgument(format!(
                    "trait {d} must lie in [0, 1], got {t}"
                )));
            }
        }
        Ok(LatentState { theta })
    }

    /// The no-knowledge starting point, all traits 0.
    pub fn zeros(dim: usize) -> Result<Self> {
        LatentState::new(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Sup-norm distance to full mastery: `max_d (1 - theta_d)`.
    pub fn distance_to_mastery(&self) -> f64 {
        let mut worst = 0.0f64;
        for &t in &self.theta {
            let gap = 1.0 - t;
            if gap > worst {
                worst = gap;
            }
        }
        worst
    }
}

/// A teaching material, indexed 1-based to match how materials are labeled in
/// reports and plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MaterialAction {
    index: usize,
}

impl MaterialAction {
    /// Material `index` out of `n_actions` available ones; `index` must lie
    /// in `1..=n_actions`.
    pub fn new(index: usize, n_actions: usize) -> Result<Self> {
        if n_actions == 0 {
            return Err(Error::InvalidArgument(
                "there must be at least one material".into(),
            ));
        }
        if index == 0 || index > n_actions {
            return Err(Error::InvalidArgument(format!(
                "material index must lie in 1..={n_actions}, got {index}"
            )));
        }
        Ok(MaterialAction { index })
    }

    /// 1-based material index.
    pub fn index(&self) -> usize {
        self.index
    }

    /// 0-based position, e.g. into a network's output vector.
    pub fn slot(&self) -> usize {
        self.index - 1
    }
}

/// One interaction: the learner was at `state`, received `action`, and moved
/// to `next_state` earning `reward`. `terminal` marks transitions that ended
/// the episode by reaching mastery (a truncated episode's last transition is
/// not terminal).
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: LatentState,
    pub action: MaterialAction,
    pub reward: f64,
    pub next_state: LatentState,
    pub terminal: bool,
}

/// Everything recorded about one training episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    /// 1-based position of the episode in its training run.
    pub episode_index: u32,
    pub transitions: Vec<Transition>,
    /// Sum of per-step rewards, i.e. `-(steps - 1)` when the episode reached
    /// mastery and `-steps` when it was truncated.
    pub total_reward: f64,
    pub steps: u32,
}
