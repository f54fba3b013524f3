//! Command-line entry point for the adaptive-learning simulations.

use adalearn_cli::{config_file, experiments};
use adalearn_core::ExperimentConfig;
use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "adalearn", about = "Deep-RL teaching experiments on simulated learners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options every subcommand shares.
#[derive(Args)]
struct CommonArgs {
    /// Config file with `key = value` lines; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed, overriding the config file.
    #[arg(long)]
    seed: Option<u64>,

    /// Directory the run writes its artifacts into.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Train on the simulator, compare policies, and sweep observation noise.
    Sim1 {
        #[command(flatten)]
        common: CommonArgs,

        /// Also save the trained agent to this file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,

        /// Also dump the replay memory to this CSV file.
        #[arg(long)]
        transitions: Option<PathBuf>,
    },
    /// Compare training inside a fitted dynamics model against training on
    /// real learners, across dataset sizes.
    Sim2 {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate one policy on fresh learners.
    Eval {
        #[command(flatten)]
        common: CommonArgs,

        /// Which policy to run: dqn, heuristic, or random.
        #[arg(long)]
        policy: String,

        /// Observation noise level, overriding the config file.
        #[arg(long)]
        sigma: Option<f64>,

        /// Number of learners to evaluate on.
        #[arg(long, default_value_t = 200)]
        learners: u32,

        /// Agent checkpoint to load (required for the dqn policy).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Fit the learner dynamics model once and report its accuracy.
    FitDynamics {
        #[command(flatten)]
        common: CommonArgs,

        /// Learners to collect data from when no transitions file is given.
        #[arg(long, default_value_t = 20)]
        learners: u32,

        /// Fit on these recorded transitions instead of collecting fresh ones.
        #[arg(long)]
        transitions: Option<PathBuf>,
    },
}

fn load(common: &CommonArgs) -> Result<ExperimentConfig> {
    let mut config = match &common.config {
        Some(path) => config_file::load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sim1 { common, checkpoint, transitions } => {
            let config = load(&common)?;
            experiments::run_sim1(&config, &common.out, checkpoint.as_deref(), transitions.as_deref())
        }
        Command::Sim2 { common } => {
            let config = load(&common)?;
            experiments::run_sim2(&config, &common.out)
        }
        Command::Eval { common, policy, sigma, learners, checkpoint } => {
            let config = load(&common)?;
            experiments::run_eval(&config, &common.out, &policy, sigma, learners, checkpoint.as_deref())
        }
        Command::FitDynamics { common, learners, transitions } => {
            let config = load(&common)?;
            experiments::run_fit(&config, &common.out, learners, transitions.as_deref())
        }
    }
}
