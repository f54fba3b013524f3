//! Reference policies the learned one must beat: uniform random choice and a
//! mastery-aware heuristic.

use crate::error::{Error, Result};
use crate::policy::Policy;
use crate::rng::RngStream;
use crate::types::{LatentState, MaterialAction};
use alloc::format;
use alloc::vec::Vec;

/// The cutoff below which a trait still counts as unmastered, matching the
/// environment's termination band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasteryThreshold {
    tol: f64,
}

impl MasteryThreshold {
    pub fn new(tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "mastery tolerance must be positive, got {tol}"
            )));
        }
        Ok(MasteryThreshold { tol })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Whether this trait value still needs work.
    pub fn needs_work(&self, theta_d: f64) -> bool {
        theta_d < 1.0 - self.tol
    }
}

impl Default for MasteryThreshold {
    fn default() -> Self {
        MasteryThreshold { tol: 1e-3 }
    }
}

/// Uniform choice over all materials, ignoring the state.
#[derive(Debug, Clone, Copy)]
pub struct RandomPolicy {
    pub n_actions: usize,
}

impl RandomPolicy {
    pub fn new(n_actions: usize) -> Result<Self> {
        if n_actions == 0 {
            return Err(Error::InvalidArgument(
                "there must be at least one material".into(),
            ));
        }
        Ok(RandomPolicy { n_actions })
    }
}

impl Policy for RandomPolicy {
    fn name(&self) -> &str {
        "random"
    }

    fn select(&self, _state: &LatentState, rng: &mut RngStream) -> MaterialAction {
        uniform_choice_1_to(self.n_actions, rng)
    }
}

/// Materials whose taught traits intersect the still-unmastered set, for the
/// two-trait catalog (material 1 teaches trait 1, material 2 teaches trait 2,
/// material 3 teaches both).
///
/// Empty exactly when every trait is already mastered.
pub fn admissible_materials(state: &LatentState, threshold: MasteryThreshold) -> Vec<MaterialAction> {
    let t = state.theta();
    debug_assert!(t.len() >= 2, "the material catalog covers two traits");
    let need1 = threshold.needs_work(t[0]);
    let need2 = threshold.needs_work(t[1]);
    let mut out = Vec::with_capacity(3);
    if need1 {
        out.push(MaterialAction::new(1, 3).expect("static bounds"));
    }
    if need2 {
        out.push(MaterialAction::new(2, 3).expect("static bounds"));
    }
    if need1 || need2 {
        out.push(MaterialAction::new(3, 3).expect("static bounds"));
    }
    out
}

/// Uniform choice over the admissible materials; if everything is mastered
/// (so nothing is admissible), falls back to uniform over all three.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicPolicy {
    pub threshold: MasteryThreshold,
}

impl HeuristicPolicy {
    pub fn new(threshold: MasteryThreshold) -> Self {
        HeuristicPolicy { threshold }
    }
}

impl Policy for HeuristicPolicy {
    fn name(&self) -> &str {
        "heuristic"
    }

    fn select(&self, state: &LatentState, rng: &mut RngStream) -> MaterialAction {
        let candidates = admissible_materials(state, self.threshold);
        if candidates.is_empty() {
            return uniform_choice_1_to(3, rng);
        }
        let idx = (rng.uniform() * candidates.len() as f64) as usize;
        candidates[idx.min(candidates.len() - 1)]
    }
}

/// Uniform draw from `{1, ..., n}`.
fn uniform_choice_1_to(n: usize, rng: &mut RngStream) -> MaterialAction {
    let idx = (rng.uniform() * n as f64) as usize;
    MaterialAction::new(idx.min(n - 1) + 1, n).expect("index bounded by construction")
}
