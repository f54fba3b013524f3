//! The experiment runners behind the CLI subcommands.
//!
//! Every run derives its randomness from the config seed through fixed
//! `(seed, purpose, index)` triples, so rerunning a command with the same
//! config and seed reproduces every artifact byte-identically. Replicate
//! indices are documented per runner below.

use crate::checkpoint;
use crate::csv_io;
use crate::svg::{self, Series};
use adalearn_core::baselines::{HeuristicPolicy, MasteryThreshold, RandomPolicy};
use adalearn_core::dqn::{train, QAgent};
use adalearn_core::dynamics::{fit, train_virtual_dqn};
use adalearn_core::eval::{evaluate_policy, EvalSummary, RewardCurve};
use adalearn_core::learner::LearnerEnv;
use adalearn_core::policy::Policy;
use adalearn_core::rng::{purpose, RngStream};
use adalearn_core::{EpisodeLog, ExperimentConfig, Transition};
use anyhow::{anyhow, bail, Context, Result};
use std::path::{Path, PathBuf};

/// Noise levels of the observation-error sweep.
pub const SIGMA_SWEEP: [f64; 5] = [0.01, 0.02, 0.03, 0.04, 0.05];

/// Dataset sizes (in real learners) of the model-fidelity sweep.
pub const LEARNER_SWEEP: [u32; 9] = [10, 20, 30, 40, 50, 100, 150, 200, 2000];

/// Window of the trailing moving average applied to training curves.
pub const SMOOTHING_WINDOW: usize = 20;

/// Learners per policy evaluation.
pub const EVAL_LEARNERS: u32 = 200;

/// An output directory whose files are removed again if the run fails
/// before [`OutDir::commit`].
pub struct OutDir {
    path: PathBuf,
    created_dir: bool,
    files: Vec<PathBuf>,
    committed: bool,
}

impl OutDir {
    pub fn create(path: &Path) -> Result<OutDir> {
        let created_dir = !path.exists();
        std::fs::create_dir_all(path)
            .with_context(|| format!("creating output directory {}", path.display()))?;
        Ok(OutDir {
            path: path.to_path_buf(),
            created_dir,
            files: Vec::new(),
            committed: false,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Writes one artifact and remembers it for cleanup on failure.
    pub fn write(&mut self, name: &str, content: &str) -> Result<()> {
        let p = self.path.join(name);
        std::fs::write(&p, content).with_context(|| format!("writing {}", p.display()))?;
        self.files.push(p);
        Ok(())
    }

    /// Marks the run as successful, keeping all files.
    pub fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for OutDir {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for f in &self.files {
            let _ = std::fs::remove_file(f);
        }
        if self.created_dir {
            // Only removed when the run created it and nothing else is in it.
            let _ = std::fs::remove_dir(&self.path);
        }
    }
}

fn core_err(e: adalearn_core::Error) -> anyhow::Error {
    anyhow!("{e}")
}

/// Trains one agent on the real simulator; `index` decorrelates the
/// environment, initialization, and exploration streams of one run from
/// every other run under the same seed.
pub fn train_agent(
    config: &ExperimentConfig,
    index: u64,
) -> Result<(QAgent, Vec<EpisodeLog>)> {
    let mut env = LearnerEnv::new(config, RngStream::derive(config.seed, purpose::ENV, index))
        .map_err(core_err)?;
    let mut init_rng = RngStream::derive(config.seed, purpose::AGENT_INIT, index);
    let mut agent = QAgent::new(config, &mut init_rng).map_err(core_err)?;
    let mut explore = RngStream::derive(config.seed, purpose::EXPLORATION, index);
    let logs = train(&mut agent, &mut env, config.episodes, config, &mut explore)
        .map_err(core_err)?;
    Ok((agent, logs))
}

fn evaluate(
    policy: &dyn Policy,
    sigma: f64,
    config: &ExperimentConfig,
    eval_index: u64,
) -> Result<EvalSummary> {
    let mut rng = RngStream::derive(config.seed, purpose::EVAL, eval_index);
    evaluate_policy(policy, EVAL_LEARNERS, sigma, config, &mut rng).map_err(core_err)
}

fn eval_summary_chart(summaries: &[EvalSummary]) -> Result<String> {
    let series: Vec<Series> = summaries
        .iter()
        .enumerate()
        .map(|(i, s)| Series::new(s.policy_name.clone(), vec![(i as f64 + 1.0, s.mean_reward)]))
        .collect();
    svg::render_line_chart("Mean evaluation reward", "policy", "mean reward", &series)
}

/// Simulation study I: train on the true simulator, compare policies, sweep
/// observation noise, and emit one greedy trajectory.
///
/// Stream indices: the main run uses 0; noise-sweep retrainings use the
/// 1-based sweep position; the trajectory environment uses 6. Evaluation
/// stream indices are `4 * sweep position + policy` (policy: 0 dqn,
/// 1 heuristic, 2 random).
pub fn run_sim1(
    config: &ExperimentConfig,
    out_path: &Path,
    checkpoint_path: Option<&Path>,
    transitions_path: Option<&Path>,
) -> Result<()> {
    let mut out = OutDir::create(out_path)?;

    // Training curve.
    let (agent, logs) = train_agent(config, 0)?;
    let curve = RewardCurve::from_logs(&logs, SMOOTHING_WINDOW).map_err(core_err)?;
    out.write(
        "training_rewards.csv",
        &csv_io::render_training_rewards(&curve.raw, &curve.smoothed)?,
    )?;
    let episodes: Vec<f64> = (1..=curve.raw.len()).map(|i| i as f64).collect();
    out.write(
        "training_rewards.svg",
        &svg::render_line_chart(
            "Training rewards",
            "episode",
            "total reward",
            &[
                Series::new(
                    "reward",
                    episodes.iter().copied().zip(curve.raw.iter().copied()).collect(),
                ),
                Series::new(
                    "smoothed (w=20)",
                    episodes.iter().copied().zip(curve.smoothed.iter().copied()).collect(),
                ),
            ],
        )?,
    )?;

    // Policy comparison at the configured noise level.
    let greedy = agent.greedy_policy();
    let heuristic = HeuristicPolicy::new(MasteryThreshold::new(config.termination_tol).map_err(core_err)?);
    let random = RandomPolicy::new(config.n_actions).map_err(core_err)?;
    let summaries = vec![
        evaluate(&greedy, config.noise_sigma, config, 0)?,
        evaluate(&heuristic, config.noise_sigma, config, 1)?,
        evaluate(&random, config.noise_sigma, config, 2)?,
    ];
    out.write("eval_summary.csv", &csv_io::render_eval_summary(&summaries))?;
    out.write("eval_summary.svg", &eval_summary_chart(&summaries)?)?;

    // Observation-noise sweep, retraining per level.
    let mut sweep_rows = Vec::new();
    let mut dqn_points = Vec::new();
    let mut heuristic_points = Vec::new();
    for (k, &sigma) in SIGMA_SWEEP.iter().enumerate() {
        let sweep_index = k as u64 + 1;
        let mut cfg_sigma = config.clone();
        cfg_sigma.noise_sigma = sigma;
        let (agent_sigma, _) = train_agent(&cfg_sigma, sweep_index)?;
        let greedy_sigma = agent_sigma.greedy_policy();
        let dqn_eval = evaluate(&greedy_sigma, sigma, &cfg_sigma, 4 * sweep_index)?;
        let heuristic_eval = evaluate(&heuristic, sigma, &cfg_sigma, 4 * sweep_index + 1)?;
        dqn_points.push((sigma, dqn_eval.mean_reward));
        heuristic_points.push((sigma, heuristic_eval.mean_reward));
        sweep_rows.push((sigma, "dqn".to_string(), dqn_eval.mean_reward, dqn_eval.sd_reward));
        sweep_rows.push((
            sigma,
            "heuristic".to_string(),
            heuristic_eval.mean_reward,
            heuristic_eval.sd_reward,
        ));
    }
    out.write("error_sweep.csv", &csv_io::render_error_sweep(&sweep_rows))?;
    out.write(
        "error_sweep.svg",
        &svg::render_line_chart(
            "Rewards under observation noise",
            "sigma",
            "mean reward",
            &[
                Series::new("dqn", dqn_points),
                Series::new("heuristic", heuristic_points),
            ],
        )?,
    )?;

    // One greedy trajectory from the starting state on the noiseless
    // simulator.
    let mut cfg_clean = config.clone();
    cfg_clean.noise_sigma = 0.0;
    let mut env = LearnerEnv::new(
        &cfg_clean,
        RngStream::derive(config.seed, purpose::ENV, 6),
    )
    .map_err(core_err)?;
    let mut traj_rng = RngStream::derive(config.seed, purpose::EVAL, 3);
    let mut steps = Vec::new();
    {
        use adalearn_core::env::Environment;
        let mut obs = env.reset().map_err(core_err)?;
        let initial = obs.clone();
        for _ in 0..config.max_episode_steps {
            let action = greedy.select(&obs, &mut traj_rng);
            let step = env.step(action).map_err(core_err)?;
            steps.push((action, step.observation.clone()));
            obs = step.observation;
            if step.terminal {
                break;
            }
        }
        out.write("trajectory.csv", &csv_io::render_trajectory(&initial, &steps))?;
    }
    let traj_series = |trait_index: usize, name: &str| {
        Series::new(
            name,
            std::iter::once((0.0, 0.0))
                .chain(
                    steps
                        .iter()
                        .enumerate()
                        .map(|(i, (_, s))| (i as f64 + 1.0, s.theta()[trait_index])),
                )
                .collect(),
        )
    };
    out.write(
        "trajectory.svg",
        &svg::render_line_chart(
            "Greedy trajectory",
            "step",
            "trait value",
            &[traj_series(0, "theta1"), traj_series(1, "theta2")],
        )?,
    )?;

    if let Some(p) = checkpoint_path {
        checkpoint::save_agent(&agent, p)?;
    }
    if let Some(p) = transitions_path {
        let dataset: Vec<Transition> = agent.memory.iter().cloned().collect();
        std::fs::write(p, csv_io::render_transitions(&dataset)?)
            .with_context(|| format!("writing transitions {}", p.display()))?;
    }

    out.commit();
    Ok(())
}

/// Simulation study II: for each dataset size, train the actual arm on that
/// many real episodes, fit the dynamics model on the transitions the actual
/// arm collected, train the virtual arm inside the model with its replay
/// seeded from those same transitions, and evaluate both arms on fresh true
/// learners.
///
/// Stream indices: runs for dataset size N use index N (environment,
/// initialization, exploration, estimator, and virtual streams live under
/// different purposes); evaluations use 2N for the actual arm and 2N + 1 for
/// the virtual arm.
pub fn run_sim2(config: &ExperimentConfig, out_path: &Path) -> Result<()> {
    let mut out = OutDir::create(out_path)?;
    let mut report_rows = Vec::new();
    let mut comparison_rows = Vec::new();
    let mut actual_points = Vec::new();
    let mut virtual_points = Vec::new();
    let mut train_score_points = Vec::new();
    let mut test_score_points = Vec::new();
    let mut rmse_points = Vec::new();

    for &n in &LEARNER_SWEEP {
        let index = n as u64;
        let mut cfg_n = config.clone();
        cfg_n.episodes = n;
        let (actual_agent, _) = train_agent(&cfg_n, index)
            .with_context(|| format!("training the actual arm on {n} learners"))?;
        let dataset: Vec<Transition> = actual_agent.memory.iter().cloned().collect();

        let mut fit_rng = RngStream::derive(config.seed, purpose::ESTIMATOR, index);
        let (model, report) = fit(&dataset, n, config, &mut fit_rng)
            .map_err(core_err)
            .with_context(|| format!("fitting on {n} learners"))?;
        report_rows.push((n as usize, report.train_score, report.test_score, report.rmse));
        train_score_points.push((n as f64, report.train_score));
        test_score_points.push((n as f64, report.test_score));
        rmse_points.push((n as f64, report.rmse));

        let mut virtual_rng = RngStream::derive(config.seed, purpose::VIRTUAL, index);
        let (virtual_agent, _) = train_virtual_dqn(&model, &dataset, config, &mut virtual_rng)
            .with_context(|| format!("training the virtual arm on {n} learners"))?;

        let actual_eval = evaluate(&actual_agent.greedy_policy(), config.noise_sigma, config, 2 * index)?;
        let virtual_eval =
            evaluate(&virtual_agent.greedy_policy(), config.noise_sigma, config, 2 * index + 1)?;
        comparison_rows.push((
            n as usize,
            "actual".to_string(),
            actual_eval.mean_reward,
            actual_eval.sd_reward,
        ));
        comparison_rows.push((
            n as usize,
            "virtual".to_string(),
            virtual_eval.mean_reward,
            virtual_eval.sd_reward,
        ));
        actual_points.push((n as f64, actual_eval.mean_reward));
        virtual_points.push((n as f64, virtual_eval.mean_reward));
    }

    out.write("dynamics_report.csv", &csv_io::render_dynamics_report(&report_rows))?;
    out.write(
        "dynamics_report.svg",
        &svg::render_line_chart(
            "Dynamics model fit",
            "learners",
            "score",
            &[
                Series::new("train_score", train_score_points),
                Series::new("test_score", test_score_points),
                Series::new("rmse", rmse_points),
            ],
        )?,
    )?;
    out.write(
        "virtual_vs_actual.csv",
        &csv_io::render_virtual_vs_actual(&comparison_rows),
    )?;
    out.write(
        "virtual_vs_actual.svg",
        &svg::render_line_chart(
            "Virtual vs actual training",
            "learners",
            "mean reward",
            &[
                Series::new("actual", actual_points),
                Series::new("virtual", virtual_points),
            ],
        )?,
    )?;

    out.commit();
    Ok(())
}

/// Evaluates one named policy. The dqn policy needs an agent checkpoint.
pub fn run_eval(
    config: &ExperimentConfig,
    out_path: &Path,
    policy_name: &str,
    sigma: Option<f64>,
    learners: u32,
    checkpoint_path: Option<&Path>,
) -> Result<()> {
    let sigma = sigma.unwrap_or(config.noise_sigma);
    let policy: Box<dyn Policy> = match policy_name {
        "random" => Box::new(RandomPolicy::new(config.n_actions).map_err(core_err)?),
        "heuristic" => Box::new(HeuristicPolicy::new(
            MasteryThreshold::new(config.termination_tol).map_err(core_err)?,
        )),
        "dqn" => {
            let p = checkpoint_path
                .ok_or_else(|| anyhow!("the dqn policy needs --checkpoint AGENT_FILE"))?;
            Box::new(checkpoint::load_agent(config, p)?.greedy_policy())
        }
        other => bail!("unknown policy `{other}` (expected dqn, heuristic, or random)"),
    };

    let mut out = OutDir::create(out_path)?;
    let mut rng = RngStream::derive(config.seed, purpose::EVAL, 0);
    let summary =
        evaluate_policy(policy.as_ref(), learners, sigma, config, &mut rng).map_err(core_err)?;
    out.write("eval_summary.csv", &csv_io::render_eval_summary(std::slice::from_ref(&summary)))?;
    out.write("eval_summary.svg", &eval_summary_chart(std::slice::from_ref(&summary))?)?;
    out.commit();
    Ok(())
}

/// Fits the dynamics model once, on recorded transitions when a file is
/// given and otherwise on data collected by training the actual arm for
/// `learners` episodes, and writes the fit report plus the fitted network.
pub fn run_fit(
    config: &ExperimentConfig,
    out_path: &Path,
    learners: u32,
    transitions_path: Option<&Path>,
) -> Result<()> {
    let (dataset, n_learners) = match transitions_path {
        Some(p) => (csv_io::load_transitions(p, config.n_actions)?, learners),
        None => {
            let mut cfg_n = config.clone();
            cfg_n.episodes = learners;
            let (agent, _) = train_agent(&cfg_n, learners as u64)?;
            (agent.memory.iter().cloned().collect(), learners)
        }
    };

    let mut out = OutDir::create(out_path)?;
    let mut fit_rng = RngStream::derive(config.seed, purpose::ESTIMATOR, n_learners as u64);
    let (model, report) = fit(&dataset, n_learners, config, &mut fit_rng).map_err(core_err)?;
    out.write(
        "dynamics_report.csv",
        &csv_io::render_dynamics_report(&[(
            n_learners as usize,
            report.train_score,
            report.test_score,
            report.rmse,
        )]),
    )?;
    out.write(
        "dynamics_report.svg",
        &svg::render_line_chart(
            "Dynamics model fit",
            "learners",
            "score",
            &[
                Series::new("train_score", vec![(n_learners as f64, report.train_score)]),
                Series::new("test_score", vec![(n_learners as f64, report.test_score)]),
                Series::new("rmse", vec![(n_learners as f64, report.rmse)]),
            ],
        )?,
    )?;
    out.write("dynamics_model.ckpt", &checkpoint::render_network(model.network()))?;
    out.commit();
    Ok(())
}
