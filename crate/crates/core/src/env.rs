//! The episodic environment interface shared by the real learner simulator
//! and the learned virtual environment.

use crate::error::Result;
use crate::types::{LatentState, MaterialAction};

/// What one environment step hands back to the agent.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvStep {
    /// The state as the agent gets to see it (possibly noisy).
    pub observation: LatentState,
    pub reward: f64,
    /// True when this step reached mastery and ended the episode.
    pub terminal: bool,
}

/// An episodic environment over latent learner states.
///
/// `reset` starts a fresh episode and returns its first observation; `step`
/// applies one material. Stepping after a terminal step, or past the episode
/// cap, is a state error.
pub trait Environment {
    fn reset(&mut self) -> Result<LatentState>;
    fn step(&mut self, action: MaterialAction) -> Result<EnvStep>;
}
