//! Randomized property checks of the invariants the experiments lean on:
//! learner progress is monotone and bounded, rewards and termination agree,
//! the exploration schedule is a clamped ramp, and the fitted-model rollout
//! machinery inherits the same guarantees by construction.

use adalearn_core::baselines::{admissible_materials, MasteryThreshold};
use adalearn_core::dqn::EpsilonSchedule;
use adalearn_core::dynamics::{virtual_step, DynamicsModel};
use adalearn_core::eval::smooth;
use adalearn_core::learner::{truncated_increment_mean, LearnerEnv};
use adalearn_core::net::DenseNetwork;
use adalearn_core::rng::{beta_one_b_inverse_cdf, purpose, RngStream};
use adalearn_core::{ExperimentConfig, LatentState, MaterialAction};
use proptest::prelude::*;

proptest! {
    /// Real-environment episodes only ever move traits up, stay in the unit
    /// box, pay -1 per step until the mastery band, and end exactly there.
    #[test]
    fn learner_steps_are_monotone_bounded_and_reward_coded(
        seed in any::<u64>(),
        actions in prop::collection::vec(1usize..=3, 1..50),
    ) {
        let cfg = ExperimentConfig::default();
        let mut env = LearnerEnv::new(&cfg, RngStream::derive(seed, purpose::ENV, 0)).unwrap();
        let mut prev = env.true_state().clone();
        for &a in &actions {
            let action = MaterialAction::new(a, 3).unwrap();
            let (next, reward, terminal) = env.step_true(action).unwrap();
            for d in 0..prev.dim() {
                prop_assert!(next.theta()[d] >= prev.theta()[d]);
                prop_assert!(next.theta()[d] <= 1.0);
            }
            let inside = next.distance_to_mastery() < cfg.termination_tol;
            prop_assert_eq!(terminal, inside);
            prop_assert_eq!(reward, if terminal { 0.0 } else { -1.0 });
            prev = next;
            if terminal {
                break;
            }
        }
    }

    /// The Beta(1, b) quantile function stays inside the unit interval and is
    /// nondecreasing in its argument. The upper end is inclusive: for small
    /// `b` the true quantile sits so close to 1 that it rounds to exactly 1.
    #[test]
    fn beta_quantile_is_bounded_and_monotone(
        u1 in 0.0..1.0f64,
        u2 in 0.0..1.0f64,
        b in 0.01..100.0f64,
    ) {
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        let qlo = beta_one_b_inverse_cdf(lo, b);
        let qhi = beta_one_b_inverse_cdf(hi, b);
        prop_assert!((0.0..=1.0).contains(&qlo));
        prop_assert!((0.0..=1.0).contains(&qhi));
        prop_assert!(qlo <= qhi);
    }

    /// Exploration decays linearly from the ceiling to the floor and then
    /// stays clamped at the floor.
    #[test]
    fn epsilon_schedule_is_a_clamped_ramp(
        t1 in 0u64..10_000,
        t2 in 0u64..10_000,
    ) {
        let s = EpsilonSchedule::new(1.0, 0.1, 2000).unwrap();
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let e_lo = s.epsilon_at(lo);
        let e_hi = s.epsilon_at(hi);
        prop_assert!(e_hi <= e_lo);
        prop_assert!((0.1..=1.0).contains(&e_lo));
        prop_assert!((0.1..=1.0).contains(&e_hi));
        if hi >= 2000 {
            prop_assert_eq!(e_hi, 0.1);
        }
    }

    /// The trailing moving average preserves length and never leaves the
    /// envelope of the raw data; window 1 is the identity.
    #[test]
    fn smoothing_stays_inside_the_data_envelope(
        raw in prop::collection::vec(-100.0..0.0f64, 1..200),
        window in 1usize..30,
    ) {
        let out = smooth(&raw, window).unwrap();
        prop_assert_eq!(out.len(), raw.len());
        let lo = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for &v in &out {
            prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
        }
        let identity = smooth(&raw, 1).unwrap();
        for (a, b) in identity.iter().zip(raw.iter()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    /// A material appears among the admissible ones exactly when it teaches
    /// at least one still-unmastered trait.
    #[test]
    fn admissible_materials_track_unmastered_traits(
        t1 in 0.0..=1.0f64,
        t2 in 0.0..=1.0f64,
    ) {
        let threshold = MasteryThreshold::default();
        let state = LatentState::new(vec![t1, t2]).unwrap();
        let set = admissible_materials(&state, threshold);
        let need1 = threshold.needs_work(t1);
        let need2 = threshold.needs_work(t2);
        prop_assert_eq!(set.iter().any(|m| m.index() == 1), need1);
        prop_assert_eq!(set.iter().any(|m| m.index() == 2), need2);
        prop_assert_eq!(set.iter().any(|m| m.index() == 3), need1 || need2);
        prop_assert_eq!(set.is_empty(), !need1 && !need2);
    }

    /// The mean clamped increment is nonnegative, below both the remaining
    /// gap and the unclamped mean, and grows with the gap.
    #[test]
    fn truncated_increment_mean_is_bounded_and_monotone(
        g1 in 0.0..=1.0f64,
        g2 in 0.0..=1.0f64,
        b in 0.1..50.0f64,
    ) {
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let m_lo = truncated_increment_mean(lo, b);
        let m_hi = truncated_increment_mean(hi, b);
        prop_assert!(m_lo >= 0.0);
        prop_assert!(m_lo <= lo + 1e-15);
        prop_assert!(m_hi <= 1.0 / (1.0 + b) + 1e-15);
        prop_assert!(m_lo <= m_hi + 1e-15);
    }

    /// Latent states accept exactly the unit box.
    #[test]
    fn latent_state_accepts_exactly_the_unit_box(
        theta in prop::collection::vec(-0.5..1.5f64, 1..5),
    ) {
        let ok = theta.iter().all(|t| (0.0..=1.0).contains(t));
        prop_assert_eq!(LatentState::new(theta).is_ok(), ok);
    }

    /// Fitted-model rollouts clamp predictions into the no-regression band,
    /// whatever the network weights, and code rewards like the real thing.
    #[test]
    fn virtual_steps_respect_the_no_regression_band(
        net_seed in any::<u64>(),
        t1 in 0.0..=1.0f64,
        t2 in 0.0..=1.0f64,
        a in 1usize..=3,
    ) {
        let mut rng = RngStream::new(net_seed);
        let net = DenseNetwork::init(&[5, 32, 2], &mut rng).unwrap();
        let model = DynamicsModel::from_network(net, 2, 3, 1e-3).unwrap();
        let state = LatentState::new(vec![t1, t2]).unwrap();
        let action = MaterialAction::new(a, 3).unwrap();
        let (next, reward, terminal) = virtual_step(&model, &state, action).unwrap();
        for d in 0..2 {
            prop_assert!(next.theta()[d] >= state.theta()[d]);
            prop_assert!(next.theta()[d] <= 1.0);
        }
        prop_assert_eq!(terminal, next.distance_to_mastery() < 1e-3);
        prop_assert_eq!(reward, if terminal { 0.0 } else { -1.0 });
    }
}
