//! Learning the environment itself: a network that predicts the next latent
//! state from the current one and the material applied, plus a deterministic
//! virtual environment built on those predictions.
//!
//! The point of the estimator is sample efficiency at the system level: a
//! modest batch of real interactions is enough to fit the one-step dynamics,
//! after which a policy trains against the fitted model instead of against
//! further real learners. The recorded interactions do double duty: they fit
//! the model, and they seed the virtual agent's replay so the value function
//! keeps seeing true dynamics alongside the model's rollouts.

use crate::config::ExperimentConfig;
use crate::dqn::{train, QAgent};
use crate::env::{EnvStep, Environment};
use crate::error::{Error, Result};
use crate::net::{adam_step, AdamState, DenseNetwork, NetCache};
use crate::rng::RngStream;
use crate::types::{EpisodeLog, LatentState, MaterialAction, Transition};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Fitting recipe shared by every estimator: full passes over the training
/// split in shuffled minibatches under Adam.
const FIT_EPOCHS: usize = 200;
const FIT_BATCH: usize = 64;
const FIT_LEARNING_RATE: f64 = 1e-3;
/// Fraction of the data held out for scoring, as fifths.
const TEST_FIFTH: usize = 5;
/// Below this many transitions a train/test split is meaningless.
const MIN_FIT_TRANSITIONS: usize = 10;

/// Matched truth and prediction rows for one split, one row per transition.
type ScoredSplit = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// A fitted one-step model of the learner dynamics.
///
/// Input is the state concatenated with a one-hot encoding of the material;
/// output is the predicted next state (raw, unclamped).
#[derive(Debug, Clone)]
pub struct DynamicsModel {
    network: DenseNetwork,
    dim: usize,
    n_actions: usize,
    termination_tol: f64,
}

impl DynamicsModel {
    pub fn network(&self) -> &DenseNetwork {
        &self.network
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn termination_tol(&self) -> f64 {
        self.termination_tol
    }

    /// Rebuilds a model around an existing network (e.g. from a checkpoint).
    /// The network must map `dim + n_actions` inputs to `dim` outputs.
    pub fn from_network(
        network: DenseNetwork,
        dim: usize,
        n_actions: usize,
        termination_tol: f64,
    ) -> Result<Self> {
        if network.input_size() != dim + n_actions || network.output_size() != dim {
            return Err(Error::InvalidArgument(format!(
                "network maps {} -> {}, expected {} -> {}",
                network.input_size(),
                network.output_size(),
                dim + n_actions,
                dim
            )));
        }
        if !(termination_tol > 0.0) || !termination_tol.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "termination tolerance must be positive, got {termination_tol}"
            )));
        }
        Ok(DynamicsModel {
            network,
            dim,
            n_actions,
            termination_tol,
        })
    }

    fn encode_into(&self, state: &LatentState, action: MaterialAction, buf: &mut [f64]) {
        buf[..self.dim].copy_from_slice(state.theta());
        for v in buf[self.dim..].iter_mut() {
            *v = 0.0;
        }
        buf[self.dim + action.slot()] = 1.0;
    }

    /// Raw next-state prediction, before any clamping.
    pub fn predict_raw(&self, state: &LatentState, action: MaterialAction) -> Result<Vec<f64>> {
        if state.dim() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "state has {} traits, model expects {}",
                state.dim(),
                self.dim
            )));
        }
        if action.index() > self.n_actions {
            return Err(Error::InvalidArgument(format!(
                "material {} out of range for a {}-material model",
                action.index(),
                self.n_actions
            )));
        }
        let mut input = vec![0.0; self.dim + self.n_actions];
        self.encode_into(state, action, &mut input);
        self.network.forward(&input)
    }
}

/// Goodness-of-fit of one estimator, scored on held-out data.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// R^2 on the training split.
    pub train_score: f64,
    /// R^2 on the held-out split.
    pub test_score: f64,
    /// Root mean squared error on the held-out split.
    pub rmse: f64,
    /// Transitions in the dataset overall.
    pub n_transitions: usize,
    /// Real learners the dataset came from.
    pub n_learners: u32,
}

/// Variance-weighted multioutput R^2: one minus the ratio of summed squared
/// residual norms to summed squared deviations from the mean target.
///
/// Undefined (an error) when the targets have no variance.
pub fn r_squared(truth: &[Vec<f64>], predicted: &[Vec<f64>]) -> Result<f64> {
    check_paired(truth, predicted)?;
    let dim = truth[0].len();
    let n = truth.len() as f64;
    let mut mean = vec![0.0; dim];
    for row in truth {
        for (m, &v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n;
    }
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (t, p) in truth.iter().zip(predicted.iter()) {
        for d in 0..dim {
            let r = t[d] - p[d];
            ss_res += r * r;
            let c = t[d] - mean[d];
            ss_tot += c * c;
        }
    }
    if ss_tot == 0.0 {
        return Err(Error::UndefinedScore(
            "R^2 needs targets with non-zero variance".into(),
        ));
    }
    Ok(1.0 - ss_res / ss_tot)
}

/// Root mean squared error over vector pairs: the square root of the mean
/// squared residual norm per pair.
pub fn rmse(truth: &[Vec<f64>], predicted: &[Vec<f64>]) -> Result<f64> {
    check_paired(truth, predicted)?;
    let mut total = 0.0;
    for (t, p) in truth.iter().zip(predicted.iter()) {
        for d in 0..t.len() {
            let r = t[d] - p[d];
            total += r * r;
        }
    }
    Ok(libm::sqrt(total / truth.len() as f64))
}

fn check_paired(truth: &[Vec<f64>], predicted: &[Vec<f64>]) -> Result<()> {
    if truth.is_empty() || truth.len() != predicted.len() {
        return Err(Error::InvalidArgument(format!(
            "need matching non-empty target/prediction lists, got {} and {}",
            truth.len(),
            predicted.len()
        )));
    }
    let dim = truth[0].len();
    if dim == 0 {
        return Err(Error::InvalidArgument("targets must be non-empty vectors".into()));
    }
    for (t, p) in truth.iter().zip(predicted.iter()) {
        if t.len() != dim || p.len() != dim {
            return Err(Error::InvalidArgument(
                "all target/prediction vectors must share one length".into(),
            ));
        }
    }
    Ok(())
}

/// Fits a dynamics estimator to recorded transitions.
///
/// The data is shuffled and split 80/20; the estimator trains on the
/// 80% under the fixed recipe (Adam, minibatches of `64`, `200` epochs,
/// learning rate `1e-3`) and is scored on the held-out 20%. `rng` drives the
/// shuffles and the weight initialization, so a fit is reproducible from its
/// stream. `n_learners` is carried into the report for bookkeeping.
pub fn fit(
    transitions: &[Transition],
    n_learners: u32,
    config: &ExperimentConfig,
    rng: &mut RngStream,
) -> Result<(DynamicsModel, FitReport)> {
    config.validate()?;
    if transitions.len() < MIN_FIT_TRANSITIONS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_FIT_TRANSITIONS} transitions to fit, got {}",
            transitions.len()
        )));
    }
    let dim = config.dim;
    let n_actions = config.n_actions;
    for tr in transitions {
        if tr.state.dim() != dim || tr.next_state.dim() != dim {
            return Err(Error::InvalidArgument(
                "transition states do not match the configured trait count".into(),
            ));
        }
        if tr.action.index() > n_actions {
            return Err(Error::InvalidArgument(
                "transition action out of range for the configured materials".into(),
            ));
        }
    }

    // Shuffled 80/20 split (Fisher-Yates on an index vector).
    let n = transitions.len();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = ((rng.uniform() * (i + 1) as f64) as usize).min(i);
        order.swap(i, j);
    }
    let n_test = (n / TEST_FIFTH).max(1);
    let (test_idx, train_idx) = order.split_at(n_test);

    let mut network = DenseNetwork::init(&config.estimator_layer_sizes(), rng)?;
    let mut optimizer = AdamState::new(network.param_count(), FIT_LEARNING_RATE)?;
    let mut cache = NetCache::for_network(&network);
    let mut grad = vec![0.0; network.param_count()];
    let mut dldy = vec![0.0; dim];
    let mut input = vec![0.0; dim + n_actions];

    let model_stub = DynamicsModel {
        network: DenseNetwork::zeros(&config.estimator_layer_sizes())?,
        dim,
        n_actions,
        termination_tol: config.termination_tol,
    };

    let mut batch_order: Vec<usize> = train_idx.to_vec();
    for _ in 0..FIT_EPOCHS {
        // Fresh shuffle of the training split each epoch.
        for i in (1..batch_order.len()).rev() {
            let j = ((rng.uniform() * (i + 1) as f64) as usize).min(i);
            batch_order.swap(i, j);
        }
        for chunk in batch_order.chunks(FIT_BATCH) {
            let scale = 2.0 / (dim as f64 * chunk.len() as f64);
            for g in grad.iter_mut() {
                *g = 0.0;
            }
            for &idx in chunk {
                let tr = &transitions[idx];
                model_stub.encode_into(&tr.state, tr.action, &mut input);
                network.forward_cached(&input, &mut cache)?;
                let target = tr.next_state.theta();
                for (d, v) in dldy.iter_mut().enumerate() {
                    *v = scale * (cache.output()[d] - target[d]);
                }
                network.backward_from_cache(&mut cache, &dldy, &mut grad)?;
            }
            adam_step(&mut network, &mut optimizer, &grad)?;
        }
    }

    let model = DynamicsModel {
        network,
        dim,
        n_actions,
        termination_tol: config.termination_tol,
    };

    let score_on = |idx: &[usize]| -> Result<ScoredSplit> {
        let mut truth = Vec::with_capacity(idx.len());
        let mut pred = Vec::with_capacity(idx.len());
        for &i in idx {
            let tr = &transitions[i];
            truth.push(tr.next_state.theta().to_vec());
            pred.push(model.predict_raw(&tr.state, tr.action)?);
        }
        Ok((truth, pred))
    };
    let (train_truth, train_pred) = score_on(train_idx)?;
    let (test_truth, test_pred) = score_on(test_idx)?;

    let report = FitReport {
        train_score: r_squared(&train_truth, &train_pred)?,
        test_score: r_squared(&test_truth, &test_pred)?,
        rmse: rmse(&test_truth, &test_pred)?,
        n_transitions: n,
        n_learners,
    };
    Ok((model, report))
}

/// One deterministic step of the fitted model.
///
/// The raw prediction is clamped into `[state_d, 1]` per trait, so virtual
/// learners inherit the real environment's no-retrogression and boundedness;
/// reward and termination then follow the real rule (0 and terminal inside
/// the mastery band, else -1).
pub fn virtual_step(
    model: &DynamicsModel,
    state: &LatentState,
    action: MaterialAction,
) -> Result<(LatentState, f64, bool)> {
    let raw = model.predict_raw(state, action)?;
    let mut next = vec![0.0; model.dim];
    for (d, v) in next.iter_mut().enumerate() {
        *v = raw[d].clamp(state.theta()[d], 1.0);
    }
    let next = LatentState::new(next)?;
    let terminal = next.distance_to_mastery() < model.termination_tol;
    let reward = if terminal { 0.0 } else { -1.0 };
    Ok((next, reward, terminal))
}

/// The fitted model wrapped as an episodic environment: deterministic steps,
/// noiseless observations, same reward rule and step cap as the real one.
#[derive(Debug, Clone)]
pub struct VirtualEnv {
    model: DynamicsModel,
    state: LatentState,
    max_steps: u32,
    step_count: u32,
    terminal: bool,
}

impl VirtualEnv {
    pub fn new(model: DynamicsModel, max_steps: u32) -> Result<Self> {
        if max_steps == 0 {
            return Err(Error::InvalidArgument(
                "the episode step cap must be at least 1".into(),
            ));
        }
        let state = LatentState::zeros(model.dim())?;
        Ok(VirtualEnv {
            model,
            state,
            max_steps,
            step_count: 0,
            terminal: false,
        })
    }

    pub fn state(&self) -> &LatentState {
        &self.state
    }
}

impl Environment for VirtualEnv {
    fn reset(&mut self) -> Result<LatentState> {
        self.state = LatentState::zeros(self.model.dim())?;
        self.step_count = 0;
        self.terminal = false;
        Ok(self.state.clone())
    }

    fn step(&mut self, action: MaterialAction) -> Result<EnvStep> {
        if self.terminal {
            return Err(Error::InvalidState(
                "this virtual episode already terminated; reset before stepping again".into(),
            ));
        }
        if self.step_count >= self.max_steps {
            return Err(Error::InvalidState(format!(
                "episode step cap of {} reached; reset before stepping again",
                self.max_steps
            )));
        }
        let (next, reward, terminal) = virtual_step(&self.model, &self.state, action)?;
        self.state = next.clone();
        self.step_count += 1;
        self.terminal = terminal;
        Ok(EnvStep {
            observation: next,
            reward,
            terminal,
        })
    }
}

/// Trains a fresh Q-learning agent inside the fitted model, under the same
/// config as a real training run.
///
/// The agent's replay memory starts preloaded with `experience`, the real
/// transitions the model was fitted on, so minibatches mix real steps with
/// model rollouts. The real steps anchor the value function where a mean
/// predictor is systematically off: near the trait ceiling the true
/// increment collapses to exactly the remaining headroom or, for a material
/// aimed at an already mastered trait, to exactly zero, and only recorded
/// experience carries those hard edges.
///
/// `rng` seeds the agent's weights and drives exploration and replay
/// sampling; the virtual environment itself is deterministic.
pub fn train_virtual_dqn(
    model: &DynamicsModel,
    experience: &[Transition],
    config: &ExperimentConfig,
    rng: &mut RngStream,
) -> Result<(QAgent, Vec<EpisodeLog>)> {
    let mut init_rng = rng.fork();
    let mut agent = QAgent::new(config, &mut init_rng)?;
    for transition in experience {
        agent.memory.push(transition.clone());
    }
    let mut env = VirtualEnv::new(model.clone(), config.max_episode_steps)?;
    let logs = train(&mut agent, &mut env, config.episodes, config, rng)?;
    Ok((agent, logs))
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

    fn rows(data: &[[f64; 2]]) -> Vec<Vec<f64>> {
        data.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn r_squared_matches_hand_cases() {
        let truth = rows(&[[0.0, 0.0], [1.0, 1.0]]);
        // Perfect predictions.
        assert_eq!(r_squared(&truth, &truth.clone()).unwrap(), 1.0);
        // Predicting the mean scores exactly zero.
        let mean_pred = rows(&[[0.5, 0.5], [0.5, 0.5]]);
        assert!((r_squared(&truth, &mean_pred).unwrap()).abs() < 1e-15);
        // A maximally wrong constant scores -1 here.
        let bad = rows(&[[0.0, 0.0], [0.0, 0.0]]);
        assert!((r_squared(&truth, &bad).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn r_squared_is_undefined_for_constant_targets() {
        let truth = rows(&[[0.5, 0.5], [0.5, 0.5]]);
        let pred = rows(&[[0.4, 0.4], [0.6, 0.6]]);
        assert!(matches!(
            r_squared(&truth, &pred),
            Err(Error::UndefinedScore(_))
        ));
    }

    #[test]
    fn rmse_matches_hand_cases() {
        let truth = rows(&[[0.0, 0.0], [1.0, 1.0]]);
        assert_eq!(rmse(&truth, &truth.clone()).unwrap(), 0.0);
        // One pair, residual norm 0.5: rmse sqrt(0.25/1) = 0.5.
        let t = rows(&[[0.5, 0.0]]);
        let p = rows(&[[0.0, 0.0]]);
        assert!((rmse(&t, &p).unwrap() - 0.5).abs() < 1e-15);
        // Doubling every residual doubles the score.
        let p2 = rows(&[[-0.5, 0.0]]);
        assert!((rmse(&t, &p2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scores_validate_their_inputs() {
        assert!(r_squared(&[], &[]).is_err());
        let a = rows(&[[0.1, 0.2]]);
        let b = rows(&[[0.1, 0.2], [0.3, 0.4]]);
        assert!(r_squared(&a, &b).is_err());
        assert!(rmse(&a, &b).is_err());
        let ragged = vec![vec![0.1, 0.2], vec![0.3]];
        assert!(rmse(&ragged, &ragged.clone()).is_err());
    }

    /// Straight-from-the-formula reimplementation used as an oracle.
    fn r_squared_oracle(truth: &[Vec<f64>], pred: &[Vec<f64>]) -> f64 {
        let n = truth.len() as f64;
        let dim = truth[0].len();
        let mean: Vec<f64> = (0..dim)
            .map(|d| truth.iter().map(|r| r[d]).sum::<f64>() / n)
            .collect();
        let num: f64 = truth
            .iter()
            .zip(pred)
            .map(|(t, p)| (0..dim).map(|d| (t[d] - p[d]) * (t[d] - p[d])).sum::<f64>())
            .sum();
        let den: f64 = truth
            .iter()
            .map(|t| (0..dim).map(|d| (t[d] - mean[d]) * (t[d] - mean[d])).sum::<f64>())
            .sum();
        1.0 - num / den
    }

    fn rmse_oracle(truth: &[Vec<f64>], pred: &[Vec<f64>]) -> f64 {
        let total: f64 = truth
            .iter()
            .zip(pred)
            .map(|(t, p)| {
                (0..t.len())
                    .map(|d| (t[d] - p[d]) * (t[d] - p[d]))
                    .sum::<f64>()
            })
            .sum();
        libm::sqrt(total / truth.len() as f64)
    }

    #[test]
    fn scores_agree_with_independent_oracles_on_random_data() {
        let mut rng = RngStream::new(31);
        for _ in 0..20 {
            let n = 5 + (rng.uniform() * 50.0) as usize;
            let truth: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.uniform(), rng.uniform()])
                .collect();
            let pred: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.uniform(), rng.uniform()])
                .collect();
            let r2 = r_squared(&truth, &pred).unwrap();
            assert!((r2 - r_squared_oracle(&truth, &pred)).abs() < 1e-12);
            let e = rmse(&truth, &pred).unwrap();
            assert!((e - rmse_oracle(&truth, &pred)).abs() < 1e-12);
        }
    }

    fn identity_transitions(n: usize, seed: u64) -> Vec<Transition> {
        // Synthetic task: the next state equals the current state, which a
        // tiny network can learn almost exactly.
        let mut rng = RngStream::new(seed);
        (0..n)
            .map(|i| {
                let s = state(rng.uniform(), rng.uniform());
                Transition {
                    state: s.clone(),
                    action: mat(1 + i % 3),
                    reward: -1.0,
                    next_state: s,
                    terminal: false,
                }
            })
            .collect()
    }

    #[test]
    fn fit_learns_an_identity_map_nearly_perfectly() {
        let cfg = ExperimentConfig::default();
        let data = identity_transitions(1000, 5);
        let mut rng = RngStream::derive(5, purpose::ESTIMATOR, 0);
        let (_, report) = fit(&data, 33, &cfg, &mut rng).unwrap();
        assert!(report.test_score > 0.999, "test R^2 {}", report.test_score);
        assert!(report.train_score > 0.999, "train R^2 {}", report.train_score);
        assert_eq!(report.n_transitions, 1000);
        assert_eq!(report.n_learners, 33);
    }

    #[test]
    fn fit_is_deterministic_per_stream() {
        let cfg = ExperimentConfig::default();
        let data = identity_transitions(200, 6);
        let fit_once = || {
            let mut rng = RngStream::derive(6, purpose::ESTIMATOR, 0);
            fit(&data, 10, &cfg, &mut rng).unwrap()
        };
        let (model_a, report_a) = fit_once();
        let (model_b, report_b) = fit_once();
        assert_eq!(report_a, report_b);
        assert_eq!(model_a.network().params(), model_b.network().params());
    }

    #[test]
    fn fit_rejects_tiny_datasets() {
        let cfg = ExperimentConfig::default();
        let data = identity_transitions(9, 7);
        let mut rng = RngStream::new(7);
        assert!(fit(&data, 1, &cfg, &mut rng).is_err());
    }

    #[test]
    fn virtual_step_never_regresses_and_caps_at_one() {
        let cfg = ExperimentConfig::default();
        let data = identity_transitions(200, 8);
        let mut rng = RngStream::derive(8, purpose::ESTIMATOR, 0);
        let (model, _) = fit(&data, 10, &cfg, &mut rng).unwrap();
        let mut probe = RngStream::new(9);
        for _ in 0..500 {
            let s = state(probe.uniform(), probe.uniform());
            let a = mat(1 + (probe.uniform() * 3.0) as usize);
            let (next, reward, terminal) = virtual_step(&model, &s, a).unwrap();
            for d in 0..2 {
                assert!(next.theta()[d] >= s.theta()[d]);
                assert!(next.theta()[d] <= 1.0);
            }
            assert_eq!(reward == 0.0, terminal);
        }
    }

    #[test]
    fn virtual_step_is_deterministic() {
        let cfg = ExperimentConfig::default();
        let data = identity_transitions(200, 10);
        let mut rng = RngStream::derive(10, purpose::ESTIMATOR, 0);
        let (model, _) = fit(&data, 10, &cfg, &mut rng).unwrap();
        let s = state(0.3, 0.6);
        let a = virtual_step(&model, &s, mat(3)).unwrap();
        let b = virtual_step(&model, &s, mat(3)).unwrap();
        assert_eq!(a.0, b.0);
    }

    #[test]
    fn model_predicting_mastery_terminates_the_virtual_episode() {
        // Hand-build a model that always predicts [1, 1]: zero weights with
        // output biases 1.
        let mut net = DenseNetwork::zeros(&[5, 4, 2]).unwrap();
        let mut p = net.params().to_vec();
        let n = p.len();
        p[n - 2] = 1.0;
        p[n - 1] = 1.0;
        net.set_params(&p).unwrap();
        let model = DynamicsModel::from_network(net, 2, 3, 1e-3).unwrap();
        let (next, reward, terminal) = virtual_step(&model, &state(0.2, 0.4), mat(2)).unwrap();
        assert!(terminal);
        assert_eq!(reward, 0.0);
        assert_eq!(next.theta(), &[1.0, 1.0]);
    }

    #[test]
    fn virtual_env_enforces_episode_discipline() {
        let mut net = DenseNetwork::zeros(&[5, 4, 2]).unwrap();
        let mut p = net.params().to_vec();
        let n = p.len();
        p[n - 2] = 1.0;
        p[n - 1] = 1.0;
        net.set_params(&p).unwrap();
        let model = DynamicsModel::from_network(net, 2, 3, 1e-3).unwrap();
        let mut env = VirtualEnv::new(model, 200).unwrap();
        env.reset().unwrap();
        let step = env.step(mat(1)).unwrap();
        assert!(step.terminal);
        assert!(env.step(mat(1)).is_err());
        env.reset().unwrap();
        assert!(env.step(mat(1)).is_ok());
    }

    #[test]
    fn virtual_training_replay_starts_from_real_experience() {
        let net = DenseNetwork::zeros(&[5, 4, 2]).unwrap();
        let model = DynamicsModel::from_network(net, 2, 3, 1e-3).unwrap();
        let seed = vec![
            Transition {
                state: state(0.2, 1.0),
                action: mat(2),
                reward: -1.0,
                next_state: state(0.2, 1.0),
                terminal: false,
            };
            3
        ];
        // Zero episodes: nothing is trained, so the memory afterwards is
        // exactly what the seeding put there.
        let cfg = ExperimentConfig { episodes: 0, ..ExperimentConfig::default() };
        let mut rng = RngStream::derive(9, purpose::VIRTUAL, 0);
        let (agent, logs) = train_virtual_dqn(&model, &seed, &cfg, &mut rng).unwrap();
        assert!(logs.is_empty());
        assert_eq!(agent.memory.len(), seed.len());
        assert!(agent.memory.iter().eq(seed.iter()));
    }

    #[test]
    fn from_network_validates_shapes() {
        let net = DenseNetwork::zeros(&[5, 4, 2]).unwrap();
        assert!(DynamicsModel::from_network(net.clone(), 2, 3, 1e-3).is_ok());
        assert!(DynamicsModel::from_network(net.clone(), 3, 3, 1e-3).is_err());
        assert!(DynamicsModel::from_network(net, 2, 3, 0.0).is_err());
    }
}
