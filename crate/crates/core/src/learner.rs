//! The simulated learner: a two-trait, three-material stochastic environment.
//!
//! A learner's knowledge is a point `theta` in `[0,1]^2`. Material 1
//! exercises trait 1, material 2 exercises trait 2, and material 3 exercises
//! both. Applying a material moves each exercised trait up by a random
//! increment drawn from Beta(1, g), where the shape `g` grows with the
//! learner's current knowledge: the closer a trait is to mastery, the smaller
//! the expected gain (Beta(1, g) has mean 1/(1+g)). An increment that would
//! overshoot the trait ceiling is truncated at it, so learners pile up at
//! exactly 1. Every step costs reward -1 until the state enters a small
//! sup-norm band around full mastery, which ends the episode with reward 0.
//!
//! The shape functions capture diminishing returns and cross-trait effects:
//!
//! * material 1: `g1 = 3 + 8 theta1 - 0.2 theta2`
//! * material 2: `g2 = 10 - theta1 + 5 theta2`
//! * material 3: `g1 = 15 + 15 theta1 - 0.4 theta2` for trait 1, then
//!   `g2 = 20 - 28 theta1 exp(-(theta1 - 0.6)^2 / 0.3) + 30 theta2 - 0.3 dtheta1`
//!   for trait 2, where `dtheta1` is the trait-1 gain just realized
//!   (material 3 teaches both traits in one sitting, so the second gain
//!   depends on the first).
//!
//! All coefficients live in [`KernelParams`] and can be overridden; the
//! defaults keep both shapes strictly positive over the whole state space
//! (the tightest spot is `g1 = 2.8` at `theta = [0, 1]` under material 1).
//!
//! Observations pass through a measurement layer: independent Gaussian noise
//! per trait, clamped back into `[0, 1]`. Rewards and termination always come
//! from the true state; only what the agent sees is noisy.

use crate::config::ExperimentConfig;
use crate::env::{EnvStep, Environment};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{LatentState, MaterialAction};
use alloc::format;
use alloc::vec;

/// Coefficients of the two Beta-shape functions, one set per material that
/// exercises each trait.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelParams {
    /// Trait-1 shape under material 1: `const + theta1 * theta1-coef + ...`.
    pub g1_a1_const: f64,
    pub g1_a1_theta1: f64,
    pub g1_a1_theta2: f64,
    /// Trait-1 shape under material 3.
    pub g1_a3_const: f64,
    pub g1_a3_theta1: f64,
    pub g1_a3_theta2: f64,
    /// Trait-2 shape under material 2.
    pub g2_a2_const: f64,
    pub g2_a2_theta1: f64,
    pub g2_a2_theta2: f64,
    /// Trait-2 shape under material 3, including the Gaussian bump in theta1
    /// and the dependence on the realized trait-1 gain.
    pub g2_a3_const: f64,
    pub g2_a3_bump: f64,
    pub g2_a3_center: f64,
    pub g2_a3_width: f64,
    pub g2_a3_theta2: f64,
    pub g2_a3_delta1: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            g1_a1_const: 3.0,
            g1_a1_theta1: 8.0,
            g1_a1_theta2: -0.2,
            g1_a3_const: 15.0,
            g1_a3_theta1: 15.0,
            g1_a3_theta2: -0.4,
            g2_a2_const: 10.0,
            g2_a2_theta1: -1.0,
            g2_a2_theta2: 5.0,
            g2_a3_const: 20.0,
            g2_a3_bump: -28.0,
            g2_a3_center: 0.6,
            g2_a3_width: 0.3,
            g2_a3_theta2: 30.0,
            g2_a3_delta1: -0.3,
        }
    }
}

impl KernelParams {
    /// All coefficients must be finite and the bump width positive.
    pub fn validate(&self) -> Result<()> {
        let all: [(&'static str, f64); 15] = [
            ("kernel.g1_a1_const", self.g1_a1_const),
            ("kernel.g1_a1_theta1", self.g1_a1_theta1),
            ("kernel.g1_a1_theta2", self.g1_a1_theta2),
            ("kernel.g1_a3_const", self.g1_a3_const),
            ("kernel.g1_a3_theta1", self.g1_a3_theta1),
            ("kernel.g1_a3_theta2", self.g1_a3_theta2),
            ("kernel.g2_a2_const", self.g2_a2_const),
            ("kernel.g2_a2_theta1", self.g2_a2_theta1),
            ("kernel.g2_a2_theta2", self.g2_a2_theta2),
            ("kernel.g2_a3_const", self.g2_a3_const),
            ("kernel.g2_a3_bump", self.g2_a3_bump),
            ("kernel.g2_a3_center", self.g2_a3_center),
            ("kernel.g2_a3_width", self.g2_a3_width),
            ("kernel.g2_a3_theta2", self.g2_a3_theta2),
            ("kernel.g2_a3_delta1", self.g2_a3_delta1),
        ];
        for (field, v) in all {
            if !v.is_finite() {
                return Err(Error::InvalidConfig {
                    field,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        if !(self.g2_a3_width > 0.0) {
            return Err(Error::InvalidConfig {
                field: "kernel.g2_a3_width",
                reason: format!("must be positive, got {}", self.g2_a3_width),
            });
        }
        Ok(())
    }

    /// Beta shape for the trait-1 increment. Defined for materials 1 and 3;
    /// material 2 does not exercise trait 1.
    pub fn g1(&self, theta: &LatentState, action: MaterialAction) -> Result<f64> {
        let t = theta.theta();
        if t.len() < 2 {
            return Err(Error::InvalidArgument(
                "the transition kernel models two traits".into(),
            ));
        }
        match action.index() {
            1 => Ok(self.g1_a1_const + self.g1_a1_theta1 * t[0] + self.g1_a1_theta2 * t[1]),
            3 => Ok(self.g1_a3_const + self.g1_a3_theta1 * t[0] + self.g1_a3_theta2 * t[1]),
            other => Err(Error::InvalidArgument(format!(
                "material {other} does not exercise trait 1"
            ))),
        }
    }

    /// Beta shape for the trait-2 increment. Defined for materials 2 and 3;
    /// `delta1` is the realized trait-1 gain of the same step (only material
    /// 3 uses it).
    pub fn g2(&self, delta1: f64, theta: &LatentState, action: MaterialAction) -> Result<f64> {
        let t = theta.theta();
        if t.len() < 2 {
            return Err(Error::InvalidArgument(
                "the transition kernel models two traits".into(),
            ));
        }
        if !(0.0..=1.0).contains(&delta1) {
            return Err(Error::InvalidArgument(format!(
                "realized trait-1 gain must lie in [0, 1], got {delta1}"
            )));
        }
        match action.index() {
            2 => Ok(self.g2_a2_const + self.g2_a2_theta1 * t[0] + self.g2_a2_theta2 * t[1]),
            3 => {
                let c = t[0] - self.g2_a3_center;
                let bump = self.g2_a3_bump * t[0] * libm::exp(-(c * c) / self.g2_a3_width);
                Ok(self.g2_a3_const
                    + bump
                    + self.g2_a3_theta2 * t[1]
                    + self.g2_a3_delta1 * delta1)
            }
            other => Err(Error::InvalidArgument(format!(
                "material {other} does not exercise trait 2"
            ))),
        }
    }
}

/// Closed-form mean of the truncated increment `min(X, gap)` with
/// `X ~ Beta(1, b)`: integrating the survival function gives
/// `(1 - (1 - gap)^(b+1)) / (b + 1)`, which reduces to `1/(1+b)` when the
/// full unit of headroom is available.
///
/// Used as the oracle for the environment's Monte Carlo tests.
pub fn truncated_increment_mean(gap: f64, b: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&gap));
    debug_assert!(b > 0.0);
    (1.0 - libm::pow(1.0 - gap, b + 1.0)) / (b + 1.0)
}

/// The simulated learner as an episodic environment.
///
/// Holds the true latent state, draws transition increments and observation
/// noise from its own stream, and reports rewards/termination from the true
/// state while handing the agent (possibly noisy) observations.
#[derive(Debug, Clone)]
pub struct LearnerEnv {
    true_state: LatentState,
    kernel: KernelParams,
    noise_sigma: f64,
    termination_tol: f64,
    max_steps: u32,
    step_count: u32,
    terminal: bool,
    rng: RngStream,
}

impl LearnerEnv {
    /// A fresh learner at `theta = [0, 0]`, drawing from `rng`.
    ///
    /// The built-in kernel models exactly two traits and three materials, so
    /// configs with other shapes are rejected here rather than misbehaving
    /// later.
    pub fn new(config: &ExperimentConfig, rng: RngStream) -> Result<Self> {
        config.validate()?;
        if config.dim != 2 || config.n_actions != 3 {
            return Err(Error::InvalidArgument(format!(
                "the built-in learner models 2 traits and 3 materials, got {} and {}",
                config.dim, config.n_actions
            )));
        }
        Ok(LearnerEnv {
            true_state: LatentState::zeros(config.dim)?,
            kernel: config.kernel.clone(),
            noise_sigma: config.noise_sigma,
            termination_tol: config.termination_tol,
            max_steps: config.max_episode_steps,
            step_count: 0,
            terminal: false,
            rng,
        })
    }

    /// The learner's actual latent state (not what the agent sees).
    pub fn true_state(&self) -> &LatentState {
        &self.true_state
    }

    pub fn steps_taken(&self) -> u32 {
        self.step_count
    }

    /// Advances the true state by one application of `action`.
    ///
    /// Returns the new true state, the step's reward (0 exactly when the step
    /// reached the mastery band, else -1), and the terminal flag. Errors if
    /// the episode already terminated or the step cap is exhausted.
    pub fn step_true(&mut self, action: MaterialAction) -> Result<(LatentState, f64, bool)> {
        if self.terminal {
            return Err(Error::InvalidState(
                "this learner already reached mastery; reset before stepping again".into(),
            ));
        }
        if self.step_count >= self.max_steps {
            return Err(Error::InvalidState(format!(
                "episode step cap of {} reached; reset before stepping again",
                self.max_steps
            )));
        }
        let t = self.true_state.theta();
        let (t1, t2) = (t[0], t[1]);
        let a = action.index();

        // Realized gains: draw Beta(1, g), truncate at the remaining headroom.
        // Material 3 draws trait 1 first because its trait-2 shape depends on
        // the realized trait-1 gain.
        let mut d1 = 0.0;
        if a == 1 || a == 3 {
            let g = self.kernel.g1(&self.true_state, action)?;
            if !(g > 0.0) {
                return Err(Error::InvalidState(format!(
                    "trait-1 shape must stay positive, got {g} at {t1}, {t2}"
                )));
            }
            let x = self.rng.beta_one_b(g)?;
            d1 = x.min(1.0 - t1);
        }
        let mut d2 = 0.0;
        if a == 2 || a == 3 {
            let g = self.kernel.g2(d1, &self.true_state, action)?;
            if !(g > 0.0) {
                return Err(Error::InvalidState(format!(
                    "trait-2 shape must stay positive, got {g} at {t1}, {t2}"
                )));
            }
            let x = self.rng.beta_one_b(g)?;
            d2 = x.min(1.0 - t2);
        }

        let next = LatentState::new(vec![(t1 + d1).min(1.0), (t2 + d2).min(1.0)])?;
        let terminal = next.distance_to_mastery() < self.termination_tol;
        let reward = if terminal { 0.0 } else { -1.0 };
        self.true_state = next.clone();
        self.step_count += 1;
        self.terminal = terminal;
        Ok((next, reward, terminal))
    }

    /// The true state as the agent sees it: independent Gaussian noise per
    /// trait, clamped into `[0, 1]`. With `noise_sigma = 0` this is the true
    /// state exactly and consumes no randomness.
    pub fn observe(&mut self) -> LatentState {
        if self.noise_sigma == 0.0 {
            return self.true_state.clone();
        }
        let mut obs = vec![0.0; self.true_state.dim()];
        for (o, &t) in obs.iter_mut().zip(self.true_state.theta().iter()) {
            let noisy = self
                .rng
                .gaussian(t, self.noise_sigma)
                .expect("sigma validated non-negative");
            *o = noisy.clamp(0.0, 1.0);
        }
        LatentState::new(obs).expect("clamped into range")
    }
}

impl Environment for LearnerEnv {
    fn reset(&mut self) -> Result<LatentState> {
        self.true_state = LatentState::zeros(self.true_state.dim())?;
        self.step_count = 0;
        self.terminal = false;
        Ok(self.observe())
    }

    fn step(&mut self, action: MaterialAction) -> Result<EnvStep> {
        let (_, reward, terminal) = self.step_true(action)?;
        Ok(EnvStep {
            observation: self.observe(),
            reward,
            terminal,
        })
    }
}

/// Probability that a learner at `theta` answers an item correctly under a
/// two-parameter logistic response model: `sigmoid(a . theta + d)` with
/// non-negative per-trait discriminations `a` and intercept `d`.
///
/// Evaluated in the numerically stable split form, so extreme logits saturate
/// cleanly instead of overflowing.
pub fn m2pl_prob(theta: &[f64], discrimination: &[f64], intercept: f64) -> Result<f64> {
    if theta.is_empty() || theta.len() != discrimination.len() {
        return Err(Error::InvalidArgument(format!(
            "theta and discrimination must have equal non-zero length, got {} and {}",
            theta.len(),
            discrimination.len()
        )));
    }
    for &a in discrimination {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "discriminations must be finite and non-negative, got {a}"
            )));
        }
    }
    if !intercept.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "intercept must be finite, got {intercept}"
        )));
    }
    let mut logit = intercept;
    for (&t, &a) in theta.iter().zip(discrimination.iter()) {
        logit += a * t;
    }
    Ok(if logit >= 0.0 {
        1.0 / (1.0 + libm::exp(-logit))
    } else {
        let e = libm::exp(logit);
        e / (1.0 + e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::purpose;

    fn state(t1: f64, t2: f64) -> LatentState {
        LatentState::new(vec![t1, t2]).unwrap()
    }

    fn mat(i: usize) -> MaterialAction {
        MaterialAction::new(i, 3).unwrap()
    }

    #[test]
    fn shape_functions_match_hand_computed_values() {
        let k = KernelParams::default();
        assert!((k.g1(&state(0.0, 0.0), mat(1)).unwrap() - 3.0).abs() < 1e-12);
        assert!((k.g1(&state(1.0, 1.0), mat(1)).unwrap() - 10.8).abs() < 1e-12);
        assert!((k.g1(&state(0.5, 0.5), mat(3)).unwrap() - 22.3).abs() < 1e-12);
        assert!((k.g2(0.0, &state(0.0, 0.0), mat(2)).unwrap() - 10.0).abs() < 1e-12);
        // Material 3's bump at its center: 20 - 28*0.6*1 + 30*0.5 = 18.2.
        assert!((k.g2(0.0, &state(0.6, 0.5), mat(3)).unwrap() - 18.2).abs() < 1e-12);
        // Realized trait-1 gain feeds back: 20 - 0 + 0 - 0.3*1 = 19.7.
        let g = k.g2(1.0, &state(0.0, 0.0), mat(3)).unwrap();
        assert!((g - 19.7).abs() < 1e-12);
    }

    #[test]
    fn shape_functions_reject_wrong_material() {
        let k = KernelParams::default();
        assert!(k.g1(&state(0.5, 0.5), mat(2)).is_err());
        assert!(k.g2(0.0, &state(0.5, 0.5), mat(1)).is_err());
        assert!(k.g2(1.5, &state(0.5, 0.5), mat(3)).is_err());
    }

    #[test]
    fn default_shapes_stay_positive_over_the_state_space() {
        // Scan a fine grid; the analytic minimum of g1 is 2.8 at [0, 1]
        // under material 1.
        let k = KernelParams::default();
        let mut min_g = f64::INFINITY;
        let mut argmin = (0.0, 0.0, 0);
        let n = 100;
        for i in 0..=n {
            for j in 0..=n {
                let s = state(i as f64 / n as f64, j as f64 / n as f64);
                for a in [1usize, 3] {
                    let g = k.g1(&s, mat(a)).unwrap();
                    assert!(g > 0.0, "g1 must stay positive at {s:?} under material {a}");
                    if g < min_g {
                        min_g = g;
                        argmin = (s.theta()[0], s.theta()[1], a);
                    }
                }
                for a in [2usize, 3] {
                    for delta1 in [0.0, 0.5, 1.0] {
                        let g = k.g2(delta1, &s, mat(a)).unwrap();
                        assert!(
                            g > 0.0,
                            "g2 must stay positive at {s:?}, material {a}, gain {delta1}"
                        );
                    }
                }
            }
        }
        assert!((min_g - 2.8).abs() < 1e-12, "grid minimum {min_g}");
        assert_eq!(argmin, (0.0, 1.0, 1));
    }

    #[test]
    fn truncated_mean_reduces_to_plain_beta_mean_at_full_headroom() {
        for &b in &[1.0, 3.0, 10.0, 30.0] {
            assert!((truncated_increment_mean(1.0, b) - 1.0 / (1.0 + b)).abs() < 1e-15);
        }
        assert_eq!(truncated_increment_mean(0.0, 5.0), 0.0);
    }

    fn env_with(sigma: f64, seed: u64) -> LearnerEnv {
        let cfg = ExperimentConfig {
            noise_sigma: sigma,
            ..ExperimentConfig::default()
        };
        LearnerEnv::new(&cfg, RngStream::derive(seed, purpose::ENV, 0)).unwrap()
    }

    #[test]
    fn material_one_only_moves_trait_one() {
        let mut env = env_with(0.0, 1);
        env.reset().unwrap();
        let (next, reward, terminal) = env.step_true(mat(1)).unwrap();
        assert_eq!(next.theta()[1], 0.0);
        assert!(next.theta()[0] > 0.0);
        assert_eq!(reward, -1.0);
        assert!(!terminal);
    }

    #[test]
    fn material_two_only_moves_trait_two() {
        let mut env = env_with(0.0, 2);
        env.reset().unwrap();
        let (next, _, _) = env.step_true(mat(2)).unwrap();
        assert_eq!(next.theta()[0], 0.0);
        assert!(next.theta()[1] > 0.0);
    }

    #[test]
    fn state_near_mastery_terminates_on_any_material() {
        for a in 1..=3usize {
            let mut env = env_with(0.0, 3 + a as u64);
            env.reset().unwrap();
            // Drop the learner just inside striking distance of the band.
            env.true_state = state(1.0 - 1e-4, 1.0 - 1e-4);
            let (next, reward, terminal) = env.step_true(mat(a)).unwrap();
            assert!(terminal, "material {a} must land in the band");
            assert_eq!(reward, 0.0);
            assert!(next.distance_to_mastery() < 1e-3);
        }
    }

    #[test]
    fn stepping_a_finished_episode_is_an_error() {
        let mut env = env_with(0.0, 9);
        env.reset().unwrap();
        env.true_state = state(1.0 - 1e-4, 1.0 - 1e-4);
        let (_, _, terminal) = env.step_true(mat(3)).unwrap();
        assert!(terminal);
        assert!(env.step_true(mat(1)).is_err());
        // Reset clears the flag.
        env.reset().unwrap();
        assert!(env.step_true(mat(1)).is_ok());
    }

    #[test]
    fn step_cap_is_enforced() {
        let cfg = ExperimentConfig {
            max_episode_steps: 3,
            ..ExperimentConfig::default()
        };
        let mut env = LearnerEnv::new(&cfg, RngStream::new(4)).unwrap();
        env.reset().unwrap();
        for _ in 0..3 {
            env.step_true(mat(1)).unwrap();
        }
        assert!(matches!(env.step_true(mat(1)), Err(Error::InvalidState(_))));
    }

    #[test]
    fn mean_first_step_gain_matches_closed_form() {
        // From [0, 0] under material 1 the gain is Beta(1, 3) truncated at
        // headroom 1, with mean 1/4. SE of the Monte Carlo mean over 1e5
        // draws is ~6.1e-4.
        let mut env = env_with(0.0, 42);
        let n = 100_000;
        let mut total = 0.0;
        for _ in 0..n {
            env.reset().unwrap();
            let (next, _, _) = env.step_true(mat(1)).unwrap();
            total += next.theta()[0];
        }
        let mean = total / n as f64;
        assert!(
            (mean - 0.25).abs() < 3.0 * 6.1e-4,
            "mean first-step gain {mean}"
        );
    }

    #[test]
    fn interior_state_gains_match_truncated_closed_form() {
        // 3x3 grid of (theta1, theta2) x material 1, mean trait-1 gain vs
        // the truncated-increment formula at that state's shape and headroom.
        let n = 100_000;
        let mut case = 0u64;
        for &t1 in &[0.0, 0.5, 0.9] {
            for &t2 in &[0.0, 0.5, 0.9] {
                case += 1;
                let k = KernelParams::default();
                let s = state(t1, t2);
                let b = k.g1(&s, mat(1)).unwrap();
                let gap = 1.0 - t1;
                let expect = truncated_increment_mean(gap, b);
                // Var(min(X, gap)) <= Var(X) <= 1/((1+b)^2) (loose); use the
                // exact raw-Beta variance as a conservative SE bound.
                let var = b / ((1.0 + b) * (1.0 + b) * (2.0 + b));
                let se = libm::sqrt(var / n as f64);

                let mut env = env_with(0.0, 7_000 + case);
                let mut total = 0.0;
                for _ in 0..n {
                    env.reset().unwrap();
                    env.true_state = s.clone();
                    env.terminal = false;
                    let (next, _, _) = env.step_true(mat(1)).unwrap();
                    total += next.theta()[0] - t1;
                }
                let mean = total / n as f64;
                assert!(
                    (mean - expect).abs() < 3.0 * se,
                    "gain at ({t1}, {t2}): {mean} vs {expect} (3 SE = {})",
                    3.0 * se
                );
            }
        }
    }

    #[test]
    fn traits_never_regress_and_stay_in_range() {
        let mut env = env_with(0.0, 11);
        let mut rng = RngStream::new(12);
        let mut prev = env.reset().unwrap();
        for _ in 0..10_000 {
            let a = mat((rng.uniform() * 3.0) as usize + 1);
            let (next, reward, terminal) = match env.step_true(a) {
                Ok(r) => r,
                Err(_) => {
                    prev = env.reset().unwrap();
                    continue;
                }
            };
            for d in 0..2 {
                assert!(next.theta()[d] >= prev.theta()[d], "no retrogression");
                assert!((0.0..=1.0).contains(&next.theta()[d]));
            }
            // Reward is 0 exactly on terminal steps, -1 otherwise.
            assert_eq!(reward == 0.0, terminal);
            if terminal {
                prev = env.reset().unwrap();
            } else {
                prev = next;
            }
        }
    }

    #[test]
    fn noiseless_observation_is_the_true_state() {
        let mut env = env_with(0.0, 13);
        env.reset().unwrap();
        env.step_true(mat(3)).unwrap();
        assert_eq!(env.observe(), env.true_state().clone());
    }

    #[test]
    fn noisy_observation_has_requested_spread() {
        let mut env = env_with(0.03, 14);
        env.reset().unwrap();
        env.true_state = state(0.5, 0.5);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let o = env.observe().theta()[0];
            assert!((0.0..=1.0).contains(&o));
            sum += o;
            sumsq += o * o;
        }
        let mean = sum / n as f64;
        let sd = libm::sqrt((sumsq - sum * sum / n as f64) / (n as f64 - 1.0));
        // At 0.5 the clamp never engages for sigma = 0.03.
        assert!((mean - 0.5).abs() < 5e-4, "observation mean {mean}");
        assert!((sd - 0.03).abs() < 2e-3, "observation sd {sd}");
    }

    #[test]
    fn observations_clamp_at_the_boundary() {
        let mut env = env_with(0.05, 15);
        env.reset().unwrap();
        env.true_state = state(1.0, 1.0);
        for _ in 0..1000 {
            let o = env.observe();
            assert!(o.theta().iter().all(|&t| t <= 1.0));
        }
    }

    #[test]
    fn rewards_come_from_the_true_state_not_the_observation() {
        // With heavy noise, drive a learner into the band; the terminal flag
        // must reflect the true state regardless of what was observed.
        let mut env = env_with(0.5, 16);
        env.reset().unwrap();
        env.true_state = state(1.0 - 1e-4, 1.0 - 1e-4);
        let (_, reward, terminal) = env.step_true(mat(3)).unwrap();
        assert!(terminal);
        assert_eq!(reward, 0.0);
    }

    #[test]
    fn m2pl_matches_hand_values() {
        // Zero logit is a coin flip.
        assert_eq!(m2pl_prob(&[0.0, 0.0], &[1.0, 1.0], 0.0).unwrap(), 0.5);
        // a . theta + d = 1*0.5 + 1*0.5 - 1 = 0.
        assert_eq!(m2pl_prob(&[0.5, 0.5], &[1.0, 1.0], -1.0).unwrap(), 0.5);
        // Known point: sigmoid(1) ~ 0.731058578630005.
        let p = m2pl_prob(&[1.0], &[1.0], 0.0).unwrap();
        assert!((p - 0.731_058_578_630_004_9).abs() < 1e-12);
    }

    #[test]
    fn m2pl_is_monotone_in_each_trait() {
        let a = [1.3, 0.7];
        let d = -0.9;
        let mut prev = 0.0;
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let p = m2pl_prob(&[t, 0.4], &a, d).unwrap();
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn m2pl_saturates_without_overflowing() {
        let hi = m2pl_prob(&[1.0], &[800.0], 0.0).unwrap();
        assert!(hi.is_finite() && hi <= 1.0 && hi > 0.999);
        let lo = m2pl_prob(&[1.0], &[1.0], -800.0).unwrap();
        assert!(lo.is_finite() && (0.0..1e-10).contains(&lo));
    }

    #[test]
    fn m2pl_rejects_bad_arguments() {
        assert!(m2pl_prob(&[0.5], &[1.0, 2.0], 0.0).is_err());
        assert!(m2pl_prob(&[], &[], 0.0).is_err());
        assert!(m2pl_prob(&[0.5], &[-1.0], 0.0).is_err());
        assert!(m2pl_prob(&[0.5], &[1.0], f64::NAN).is_err());
    }

    #[test]
    fn env_rejects_mismatched_shapes() {
        let cfg = ExperimentConfig {
            dim: 3,
            q_hidden: vec![8],
            ..ExperimentConfig::default()
        };
        assert!(LearnerEnv::new(&cfg, RngStream::new(1)).is_err());
    }
}
