//! The CSV artifacts the experiments write, and the one they read back.
//!
//! Values are formatted with Rust's shortest-roundtrip `Display` for `f64`,
//! so a file parses back to bit-identical numbers and reruns under the same
//! seed diff clean. Every writer emits a fixed header row.

use adalearn_core::eval::EvalSummary;
use adalearn_core::{LatentState, MaterialAction, Transition};
use anyhow::{anyhow, bail, Context, Result};
use std::fmt::Write as _;
use std::path::Path;

/// `episode,reward,smoothed` rows, episodes numbered from 1.
pub fn render_training_rewards(raw: &[f64], smoothed: &[f64]) -> Result<String> {
    if raw.len() != smoothed.len() {
        bail!(
            "raw and smoothed series differ in length: {} vs {}",
            raw.len(),
            smoothed.len()
        );
    }
    let mut out = String::from("episode,reward,smoothed\n");
    for (i, (r, s)) in raw.iter().zip(smoothed).enumerate() {
        writeln!(out, "{},{r},{s}", i + 1).expect("writing to a string cannot fail");
    }
    Ok(out)
}

/// `policy,mean,sd,n` rows, one per evaluated policy.
pub fn render_eval_summary(summaries: &[EvalSummary]) -> String {
    let mut out = String::from("policy,mean,sd,n\n");
    for s in summaries {
        writeln!(
            out,
            "{},{},{},{}",
            s.policy_name, s.mean_reward, s.sd_reward, s.n_eval_learners
        )
        .expect("writing to a string cannot fail");
    }
    out
}

/// `sigma,policy,mean,sd` rows, the noise sweep.
pub fn render_error_sweep(rows: &[(f64, String, f64, f64)]) -> String {
    let mut out = String::from("sigma,policy,mean,sd\n");
    for (sigma, policy, mean, sd) in rows {
        writeln!(out, "{sigma},{policy},{mean},{sd}").expect("writing to a string cannot fail");
    }
    out
}

/// `n_learners,train_score,test_score,rmse` rows, the model-fit table.
pub fn render_dynamics_report(rows: &[(usize, f64, f64, f64)]) -> String {
    let mut out = String::from("n_learners,train_score,test_score,rmse\n");
    for (n, train, test, rmse) in rows {
        writeln!(out, "{n},{train},{test},{rmse}").expect("writing to a string cannot fail");
    }
    out
}

/// `n_learners,arm,mean,sd` rows comparing the two training arms.
pub fn render_virtual_vs_actual(rows: &[(usize, String, f64, f64)]) -> String {
    let mut out = String::from("n_learners,arm,mean,sd\n");
    for (n, arm, mean, sd) in rows {
        writeln!(out, "{n},{arm},{mean},{sd}").expect("writing to a string cannot fail");
    }
    out
}

/// `step,action,theta1,theta2` rows of one two-trait trajectory. Step 0 is
/// the initial state and carries no action (empty field).
pub fn render_trajectory(initial: &LatentState, steps: &[(MaterialAction, LatentState)]) -> String {
    let mut out = String::from("step,action,theta1,theta2\n");
    writeln!(
        out,
        "0,,{},{}",
        initial.theta()[0],
        initial.theta()[1]
    )
    .expect("writing to a string cannot fail");
    for (i, (action, state)) in steps.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            action.index(),
            state.theta()[0],
            state.theta()[1]
        )
        .expect("writing to a string cannot fail");
    }
    out
}

/// `theta1,theta2,action,reward,next_theta1,next_theta2,terminal` rows of a
/// two-trait transition dataset.
pub fn render_transitions(transitions: &[Transition]) -> Result<String> {
    let mut out = String::from("theta1,theta2,action,reward,next_theta1,next_theta2,terminal\n");
    for t in transitions {
        if t.state.dim() != 2 || t.next_state.dim() != 2 {
            bail!("the transition file format covers two traits, got {}", t.state.dim());
        }
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            t.state.theta()[0],
            t.state.theta()[1],
            t.action.index(),
            t.reward,
            t.next_state.theta()[0],
            t.next_state.theta()[1],
            u8::from(t.terminal)
        )
        .expect("writing to a string cannot fail");
    }
    Ok(out)
}

/// Parses a file produced by [`render_transitions`].
pub fn parse_transitions(text: &str, n_actions: usize) -> Result<Vec<Transition>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != "theta1,theta2,action,reward,next_theta1,next_theta2,terminal" {
        bail!("unexpected transitions header `{header}`");
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            bail!("line {line_no}: expected 7 fields, got {}", fields.len());
        }
        let f = |i: usize| -> Result<f64> {
            fields[i]
                .parse()
                .map_err(|e| anyhow!("line {line_no}: field {}: {e}", i + 1))
        };
        let state = LatentState::new(vec![f(0)?, f(1)?])
            .map_err(|e| anyhow!("line {line_no}: {e}"))?;
        let action: usize = fields[2]
            .parse()
            .map_err(|e| anyhow!("line {line_no}: field 3: {e}"))?;
        let action = MaterialAction::new(action, n_actions)
            .map_err(|e| anyhow!("line {line_no}: {e}"))?;
        let next_state = LatentState::new(vec![f(4)?, f(5)?])
            .map_err(|e| anyhow!("line {line_no}: {e}"))?;
        let terminal = match fields[6].trim() {
            "0" => false,
            "1" => true,
            other => bail!("line {line_no}: terminal must be 0 or 1, got `{other}`"),
        };
        out.push(Transition {
            state,
            action,
            reward: f(3)?,
            next_state,
            terminal,
        });
    }
    Ok(out)
}

/// Reads a transitions CSV from disk.
pub fn load_transitions(path: &Path, n_actions: usize) -> Result<Vec<Transition>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading transitions {}", path.display()))?;
    parse_transitions(&text, n_actions)
        .with_context(|| format!("parsing transitions {}", path.display()))
}
