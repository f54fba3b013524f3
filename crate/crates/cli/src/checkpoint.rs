//! Plain-text network and agent checkpoints.
//!
//! A network file is a two-line header followed by one parameter per line in
//! the network's flat canonical order (layer by layer, weights row-major,
//! then biases):
//!
//! ```text
//! ndnet v1
//! layers 2 64 32 3
//! -0.3791851202289512
//! ...
//! ```
//!
//! Parameters are written with `f64`'s shortest-roundtrip formatting, so a
//! reloaded network reproduces forward outputs bit-exactly.
//!
//! An agent file is a network file plus one footer line,
//! `agent schedule_steps=<n> adam_steps=<n>`, recording how far exploration
//! had decayed and how many optimizer steps training took. Loading restores
//! the schedule position; optimizer moments are not serialized, so the agent
//! resumes with a fresh optimizer and an empty replay memory, and
//! `adam_steps` documents provenance only.

use adalearn_core::dqn::QAgent;
use adalearn_core::net::DenseNetwork;
use adalearn_core::ExperimentConfig;
use anyhow::{anyhow, bail, Context, Result};
use std::fmt::Write as _;
use std::path::Path;

const MAGIC: &str = "ndnet v1";

/// Renders a network checkpoint.
pub fn render_network(net: &DenseNetwork) -> String {
    let mut out = String::from(MAGIC);
    out.push('\n');
    out.push_str("layers");
    for s in net.layer_sizes() {
        write!(out, " {s}").expect("writing to a string cannot fail");
    }
    out.push('\n');
    for p in net.params() {
        writeln!(out, "{p}").expect("writing to a string cannot fail");
    }
    out
}

/// Renders an agent checkpoint: the network plus the state footer.
pub fn render_agent(agent: &QAgent) -> String {
    let mut out = render_network(agent.network());
    writeln!(
        out,
        "agent schedule_steps={} adam_steps={}",
        agent.schedule.steps_taken(),
        agent.optimizer().step_count()
    )
    .expect("writing to a string cannot fail");
    out
}

pub fn save_network(net: &DenseNetwork, path: &Path) -> Result<()> {
    std::fs::write(path, render_network(net))
        .with_context(|| format!("writing checkpoint {}", path.display()))
}

pub fn save_agent(agent: &QAgent, path: &Path) -> Result<()> {
    std::fs::write(path, render_agent(agent))
        .with_context(|| format!("writing checkpoint {}", path.display()))
}

/// Parses a network checkpoint; `footer` receives any line after the
/// parameters (an agent footer) or `None` for a bare network file.
fn parse_parts(text: &str) -> Result<(DenseNetwork, Option<&str>)> {
    let mut lines = text.lines();
    let magic = lines.next().unwrap_or("");
    if magic != MAGIC {
        bail!("not a checkpoint: first line is `{magic}`, expected `{MAGIC}`");
    }
    let layer_line = lines.next().unwrap_or("");
    let mut parts = layer_line.split_whitespace();
    if parts.next() != Some("layers") {
        bail!("expected a `layers ...` line, got `{layer_line}`");
    }
    let sizes: Vec<usize> = parts
        .map(|p| p.parse().map_err(|e| anyhow!("bad layer size `{p}`: {e}")))
        .collect::<Result<_>>()?;
    let mut net = DenseNetwork::zeros(&sizes).map_err(|e| anyhow!("{e}"))?;
    let mut params = vec![0.0; net.param_count()];
    for (i, slot) in params.iter_mut().enumerate() {
        let line = lines
            .next()
            .ok_or_else(|| anyhow!("expected {} parameters, file ends after {i}", net.param_count()))?;
        *slot = line
            .trim()
            .parse()
            .map_err(|e| anyhow!("parameter {i}: cannot parse `{line}`: {e}"))?;
    }
    net.set_params(&params).map_err(|e| anyhow!("{e}"))?;
    let footer = lines.next();
    if footer.is_some() {
        if let Some(extra) = lines.next() {
            bail!("unexpected content after the footer: `{extra}`");
        }
    }
    Ok((net, footer))
}

/// Loads a bare network checkpoint.
pub fn load_network(path: &Path) -> Result<DenseNetwork> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading checkpoint {}", path.display()))?;
    let (net, footer) = parse_parts(&text)?;
    if let Some(f) = footer {
        bail!("expected a bare network checkpoint, found a footer `{f}` (agent file?)");
    }
    Ok(net)
}

/// Loads an agent checkpoint: the network, a fresh optimizer and memory, and
/// the exploration schedule restored to where training left it.
pub fn load_agent(config: &ExperimentConfig, path: &Path) -> Result<QAgent> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading checkpoint {}", path.display()))?;
    let (net, footer) = parse_parts(&text)?;
    let footer = footer.ok_or_else(|| {
        anyhow!("expected an agent checkpoint with a footer line, found a bare network file")
    })?;
    let mut fields = footer.split_whitespace();
    if fields.next() != Some("agent") {
        bail!("unexpected footer `{footer}`");
    }
    let mut schedule_steps = None;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| anyhow!("bad footer field `{field}`"))?;
        match key {
            "schedule_steps" => {
                schedule_steps = Some(value.parse::<u64>().map_err(|e| anyhow!("{e}"))?)
            }
            // Provenance only; moments are not serialized.
            "adam_steps" => {
                value.parse::<u64>().map_err(|e| anyhow!("{e}"))?;
            }
            other => bail!("unknown footer field `{other}`"),
        }
    }
    let schedule_steps =
        schedule_steps.ok_or_else(|| anyhow!("footer is missing schedule_steps"))?;
    let mut agent = QAgent::from_network(config, net).map_err(|e| anyhow!("{e}"))?;
    agent.schedule.set_steps_taken(schedule_steps);
    Ok(agent)
}
