//! Deep Q-learning over the learner environment.
//!
//! One network maps a latent-state observation to one value per material.
//! Actions are chosen epsilon-greedily with a linearly annealed epsilon;
//! every environment step stores its transition in replay memory, samples a
//! minibatch (with replacement), and applies one Adam update toward the
//! one-step bootstrap targets `r + gamma max_a Q(s', a)` (terminal steps use
//! the bare reward). Targets are computed with the parameters as they stood
//! before the update. By default the bootstrap uses the network being
//! trained; setting `target_sync_period` in the config bootstraps from a
//! periodically synced copy instead.
//!
//! The update minimizes the mean squared error over the minibatch, with the
//! gradient flowing only through each sampled transition's own action slot.

use crate::config::ExperimentConfig;
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::net::{adam_step, AdamState, DenseNetwork, NetCache};
use crate::policy::Policy;
use crate::rng::RngStream;
use crate::types::{EpisodeLog, LatentState, MaterialAction, Transition};
use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Transition store for experience replay. With a capacity, the oldest
/// transition is dropped first; without one, everything is kept (the default,
/// which also makes the store double as the experiment's dataset).
#[derive(Debug, Clone)]
pub struct ReplayMemory {
    items: VecDeque<Transition>,
    capacity: Option<usize>,
}

impl ReplayMemory {
    pub fn new(capacity: Option<usize>) -> Result<Self> {
        if capacity == Some(0) {
            return Err(Error::InvalidArgument(
                "replay capacity must be positive; use None to keep everything".into(),
            ));
        }
        Ok(ReplayMemory {
            items: VecDeque::new(),
            capacity,
        })
    }

    pub fn push(&mut self, transition: Transition) {
        if let Some(cap) = self.capacity {
            if self.items.len() == cap {
                self.items.pop_front();
            }
        }
        self.items.push_back(transition);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Transition> {
        self.items.get(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> + '_ {
        self.items.iter()
    }
}

/// Linearly annealed exploration rate: starts at `eps_high`, reaches
/// `eps_low` after `tau_eps` steps, and stays there.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSchedule {
    eps_high: f64,
    eps_low: f64,
    tau_eps: u64,
    steps: u64,
}

impl EpsilonSchedule {
    pub fn new(eps_high: f64, eps_low: f64, tau_eps: u64) -> Result<Self> {
        if !eps_high.is_finite() || !(0.0..=1.0).contains(&eps_high) {
            return Err(Error::InvalidArgument(format!(
                "eps_high must lie in [0, 1], got {eps_high}"
            )));
        }
        if !eps_low.is_finite() || !(0.0..=1.0).contains(&eps_low) || eps_low > eps_high {
            return Err(Error::InvalidArgument(format!(
                "eps_low must lie in [0, eps_high], got {eps_low}"
            )));
        }
        if tau_eps == 0 {
            return Err(Error::InvalidArgument("tau_eps must be at least 1".into()));
        }
        Ok(EpsilonSchedule {
            eps_high,
            eps_low,
            tau_eps,
            steps: 0,
        })
    }

    /// Exploration rate after `step` total steps.
    pub fn epsilon_at(&self, step: u64) -> f64 {
        if step >= self.tau_eps {
            return self.eps_low;
        }
        let frac = step as f64 / self.tau_eps as f64;
        self.eps_high - (self.eps_high - self.eps_low) * frac
    }

    /// Exploration rate right now.
    pub fn current(&self) -> f64 {
        self.epsilon_at(self.steps)
    }

    /// Returns the current rate and counts this step.
    pub fn advance(&mut self) -> f64 {
        let eps = self.current();
        self.steps += 1;
        eps
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    /// Restores the step counter, e.g. when reloading a checkpoint.
    pub fn set_steps_taken(&mut self, steps: u64) {
        self.steps = steps;
    }
}

/// Index of the first maximum, so ties go to the lowest-indexed material.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// `m` transitions drawn uniformly with replacement.
pub fn sample_minibatch(
    memory: &ReplayMemory,
    m: usize,
    rng: &mut RngStream,
) -> Result<Vec<Transition>> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "minibatch size must be at least 1".into(),
        ));
    }
    if memory.is_empty() {
        return Err(Error::InvalidState(
            "cannot sample from an empty replay memory".into(),
        ));
    }
    let n = memory.len();
    let mut batch = Vec::with_capacity(m);
    for _ in 0..m {
        let idx = ((rng.uniform() * n as f64) as usize).min(n - 1);
        batch.push(memory.get(idx).expect("index bounded").clone());
    }
    Ok(batch)
}

/// Mean masked squared error over a minibatch against fixed targets, along
/// with its parameter gradient, computed in one fused pass using the
/// caller's scratch buffers. Only each transition's own action slot
/// contributes to the loss. The tests pin the gradient against central
/// finite differences of the same loss.
fn masked_loss_and_grad(
    net: &DenseNetwork,
    cache: &mut NetCache,
    batch: &[Transition],
    targets: &[f64],
    dldy: &mut [f64],
    grad: &mut [f64],
) -> Result<f64> {
    let m = batch.len() as f64;
    let mut loss = 0.0;
    for g in grad.iter_mut() {
        *g = 0.0;
    }
    for (tr, &y) in batch.iter().zip(targets.iter()) {
        net.forward_cached(tr.state.theta(), cache)?;
        let e = cache.output()[tr.action.slot()] - y;
        loss += e * e;
        for v in dldy.iter_mut() {
            *v = 0.0;
        }
        dldy[tr.action.slot()] = 2.0 * e / m;
        net.backward_from_cache(cache, dldy, grad)?;
    }
    Ok(loss / m)
}

/// The Q-learning agent: network, optimizer, exploration schedule, and
/// replay memory in one place.
#[derive(Debug, Clone)]
pub struct QAgent {
    q_network: DenseNetwork,
    target_network: Option<DenseNetwork>,
    optimizer: AdamState,
    pub schedule: EpsilonSchedule,
    pub memory: ReplayMemory,
    gamma: f64,
    n_actions: usize,
    target_sync_period: u32,
    updates_done: u64,
    cache: NetCache,
    dldy: Vec<f64>,
    grad: Vec<f64>,
}

impl QAgent {
    /// Fresh agent for `config`, drawing its initial weights from `rng`.
    pub fn new(config: &ExperimentConfig, rng: &mut RngStream) -> Result<Self> {
        config.validate()?;
        let net = DenseNetwork::init(&config.q_layer_sizes(), rng)?;
        QAgent::from_network(config, net)
    }

    /// Agent wrapped around an existing network (e.g. one read back from a
    /// checkpoint). The network must have the config's Q-network shape.
    /// Optimizer moments start fresh and the replay memory starts empty.
    pub fn from_network(config: &ExperimentConfig, network: DenseNetwork) -> Result<Self> {
        config.validate()?;
        if network.layer_sizes() != config.q_layer_sizes() {
            return Err(Error::InvalidArgument(format!(
                "network shape {:?} does not match the configured {:?}",
                network.layer_sizes(),
                config.q_layer_sizes()
            )));
        }
        let optimizer = AdamState::new(network.param_count(), config.alpha)?.with_hyperparams(
            config.adam_beta1,
            config.adam_beta2,
            config.adam_epsilon,
        )?;
        let schedule = EpsilonSchedule::new(config.eps_high, config.eps_low, config.tau_eps)?;
        let memory = ReplayMemory::new(if config.replay_capacity == 0 {
            None
        } else {
            Some(config.replay_capacity)
        })?;
        let cache = NetCache::for_network(&network);
        let dldy = vec![0.0; network.output_size()];
        let grad = vec![0.0; network.param_count()];
        let target_network = (config.target_sync_period > 0).then(|| network.clone());
        Ok(QAgent {
            q_network: network,
            target_network,
            optimizer,
            schedule,
            memory,
            gamma: config.gamma,
            n_actions: config.n_actions,
            target_sync_period: config.target_sync_period,
            updates_done: 0,
            cache,
            dldy,
            grad,
        })
    }

    pub fn network(&self) -> &DenseNetwork {
        &self.q_network
    }

    /// Replaces the Q-network with one of the same shape, resetting the
    /// optimizer moments and the target copy to match.
    pub fn set_network(&mut self, network: DenseNetwork) -> Result<()> {
        if network.layer_sizes() != self.q_network.layer_sizes() {
            return Err(Error::InvalidArgument(format!(
                "replacement network shape {:?} does not match {:?}",
                network.layer_sizes(),
                self.q_network.layer_sizes()
            )));
        }
        if self.target_network.is_some() {
            self.target_network = Some(network.clone());
        }
        self.optimizer = AdamState::new(network.param_count(), self.optimizer.learning_rate)?
            .with_hyperparams(
                self.optimizer.beta1,
                self.optimizer.beta2,
                self.optimizer.epsilon,
            )?;
        self.q_network = network;
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn optimizer(&self) -> &AdamState {
        &self.optimizer
    }

    /// One Q-value per material for `state`.
    pub fn q_values(&self, state: &LatentState) -> Result<Vec<f64>> {
        self.q_network.forward(state.theta())
    }

    /// Epsilon-greedy choice: with probability epsilon a uniform material,
    /// otherwise the highest-valued one (ties to the lowest index). Each call
    /// counts one schedule step.
    pub fn select_action(&mut self, state: &LatentState, rng: &mut RngStream) -> Result<MaterialAction> {
        let eps = self.schedule.advance();
        if rng.uniform() < eps {
            let idx = ((rng.uniform() * self.n_actions as f64) as usize).min(self.n_actions - 1);
            return MaterialAction::new(idx + 1, self.n_actions);
        }
        self.q_network.forward_cached(state.theta(), &mut self.cache)?;
        MaterialAction::new(argmax(self.cache.output()) + 1, self.n_actions)
    }

    /// Bootstrap target for one transition: the bare reward on terminal
    /// steps, otherwise `r + gamma max_a Q(next, a)` under the bootstrap
    /// network (the target copy when enabled, else the live network).
    pub fn q_target(&self, transition: &Transition) -> Result<f64> {
        if transition.terminal {
            return Ok(transition.reward);
        }
        let net = self.target_network.as_ref().unwrap_or(&self.q_network);
        let q_next = net.forward(transition.next_state.theta())?;
        let best = q_next[argmax(&q_next)];
        Ok(transition.reward + self.gamma * best)
    }

    /// One optimizer step on a minibatch. Targets are computed first, with
    /// the parameters as they stand, then the masked mean-squared-error
    /// gradient is applied through Adam. Returns the (pre-update) loss.
    pub fn update(&mut self, batch: &[Transition]) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot update on an empty minibatch".into(),
            ));
        }
        let mut targets = Vec::with_capacity(batch.len());
        for tr in batch {
            targets.push(self.q_target_cached(tr)?);
        }
        let loss = masked_loss_and_grad(
            &self.q_network,
            &mut self.cache,
            batch,
            &targets,
            &mut self.dldy,
            &mut self.grad,
        )?;
        adam_step(&mut self.q_network, &mut self.optimizer, &self.grad)?;
        self.updates_done += 1;
        if let Some(target) = self.target_network.as_mut() {
            if self.updates_done.is_multiple_of(self.target_sync_period as u64) {
                *target = self.q_network.clone();
            }
        }
        Ok(loss)
    }

    /// `q_target` without the per-call allocation, for the update loop.
    fn q_target_cached(&mut self, transition: &Transition) -> Result<f64> {
        if transition.terminal {
            return Ok(transition.reward);
        }
        let net = self.target_network.as_ref().unwrap_or(&self.q_network);
        net.forward_cached(transition.next_state.theta(), &mut self.cache)?;
        let out = self.cache.output();
        Ok(transition.reward + self.gamma * out[argmax(out)])
    }

    /// A frozen copy of the current greedy behavior.
    pub fn greedy_policy(&self) -> GreedyPolicy {
        GreedyPolicy {
            network: self.q_network.clone(),
        }
    }
}

/// Deterministic policy that always takes the highest-valued material under
/// a frozen network (ties to the lowest index).
#[derive(Debug, Clone)]
pub struct GreedyPolicy {
    network: DenseNetwork,
}

impl GreedyPolicy {
    pub fn new(network: DenseNetwork) -> Self {
        GreedyPolicy { network }
    }

    pub fn network(&self) -> &DenseNetwork {
        &self.network
    }
}

impl Policy for GreedyPolicy {
    fn name(&self) -> &str {
        "dqn"
    }

    fn select(&self, state: &LatentState, _rng: &mut RngStream) -> MaterialAction {
        let q = self
            .network
            .forward(state.theta())
            .expect("state dimension matches the network input");
        MaterialAction::new(argmax(&q) + 1, q.len()).expect("network has at least one output")
    }
}

/// Runs `episodes` training episodes of the agent on `env`, updating after
/// every step, and returns one log per episode.
///
/// Episodes end on a terminal step or at the config's step cap (truncation,
/// which does not mark the last transition terminal). `rng` drives both
/// exploration and replay sampling; the environment draws from its own
/// stream, so agent-side changes never perturb the environment's randomness.
pub fn train<E: Environment>(
    agent: &mut QAgent,
    env: &mut E,
    episodes: u32,
    config: &ExperimentConfig,
    rng: &mut RngStream,
) -> Result<Vec<EpisodeLog>> {
    config.validate()?;
    let mut logs = Vec::with_capacity(episodes as usize);
    for episode_index in 1..=episodes {
        let mut obs = env.reset()?;
        let mut transitions = Vec::new();
        let mut total_reward = 0.0;
        loop {
            if transitions.len() as u32 >= config.max_episode_steps {
                break;
            }
            let action = agent.select_action(&obs, rng)?;
            let step = env.step(action)?;
            total_reward += step.reward;
            let transition = Transition {
                state: obs,
                action,
                reward: step.reward,
                next_state: step.observation.clone(),
                terminal: step.terminal,
            };
            obs = step.observation;
            agent.memory.push(transition.clone());
            transitions.push(transition);
            let batch = sample_minibatch(&agent.memory, config.minibatch, rng)?;
            agent.update(&batch)?;
            if step.terminal {
                break;
            }
        }
        let steps = transitions.len() as u32;
        logs.push(EpisodeLog {
            episode_index,
            transitions,
            total_reward,
            steps,
        });
    }
    Ok(logs)
}
