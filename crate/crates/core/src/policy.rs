//! The policy interface evaluated by the experiments.

use crate::rng::RngStream;
use crate::types::{LatentState, MaterialAction};

/// A (possibly randomized) rule for picking the next teaching material.
///
/// Policies are stateless across steps; any randomness comes from the stream
/// the caller passes in, so evaluations replay deterministically.
pub trait Policy {
    /// Short stable name used in report rows ("dqn", "heuristic", "random").
    fn name(&self) -> &str;

    fn select(&self, state: &LatentState, rng: &mut RngStream) -> MaterialAction;
}
