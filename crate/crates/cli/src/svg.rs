//! Deterministic standalone SVG line charts, one per CSV artifact.
//!
//! The renderer is a pure function of its inputs: fixed canvas, fixed
//! palette, fixed tick count, and coordinates formatted with a fixed number
//! of decimals, so rerunning an experiment reproduces every chart
//! byte-identically.

use anyhow::{bail, Result};
use std::fmt::Write as _;
use std::path::Path;

/// One named sequence of `(x, y)` points.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            name: name.into(),
            points,
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 780.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 445.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Data range over all series, padded to a nonzero span.
fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// Renders the chart. Every series needs at least one point; singleton
/// series draw a marker circle instead of a line.
pub fn render_line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<String> {
    if series.is_empty() {
        bail!("a chart needs at least one series");
    }
    for s in series {
        if s.points.is_empty() {
            bail!("series `{}` has no points", s.name);
        }
        for &(x, y) in &s.points {
            if !x.is_finite() || !y.is_finite() {
                bail!("series `{}` contains a non-finite point ({x}, {y})", s.name);
            }
        }
    }
    let (x_lo, x_hi) = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_lo, y_hi) = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let px = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * (RIGHT - LEFT);
    let py = |y: f64| BOTTOM - (y - y_lo) / (y_hi - y_lo) * (BOTTOM - TOP);

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )?;
    writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>")?;
    writeln!(
        out,
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        (LEFT + RIGHT) / 2.0,
        escape(title)
    )?;

    // Gridlines and tick labels.
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let xv = x_lo + f * (x_hi - x_lo);
        let yv = y_lo + f * (y_hi - y_lo);
        let xp = px(xv);
        let yp = py(yv);
        writeln!(
            out,
            "<line x1=\"{xp:.2}\" y1=\"{TOP}\" x2=\"{xp:.2}\" y2=\"{BOTTOM}\" stroke=\"#dddddd\"/>"
        )?;
        writeln!(
            out,
            "<line x1=\"{LEFT}\" y1=\"{yp:.2}\" x2=\"{RIGHT}\" y2=\"{yp:.2}\" stroke=\"#dddddd\"/>"
        )?;
        writeln!(
            out,
            "<text x=\"{xp:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{xv:.3}</text>",
            BOTTOM + 16.0
        )?;
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{yv:.3}</text>",
            LEFT - 6.0,
            yp + 4.0
        )?;
    }

    // Axes over the grid.
    writeln!(
        out,
        "<line x1=\"{LEFT}\" y1=\"{BOTTOM}\" x2=\"{RIGHT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>"
    )?;
    writeln!(
        out,
        "<line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{BOTTOM}\" stroke=\"black\"/>"
    )?;
    writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    )?;
    writeln!(
        out,
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        escape(y_label)
    )?;

    // Series.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.points.len() == 1 {
            let (x, y) = s.points[0];
            writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>",
                px(x),
                py(y)
            )?;
        } else {
            let mut coords = String::new();
            for &(x, y) in &s.points {
                write!(coords, "{:.2},{:.2} ", px(x), py(y))?;
            }
            writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                coords.trim_end()
            )?;
        }
    }

    // Legend, one entry per series.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = TOP + 14.0 + i as f64 * 18.0;
        writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{color}\"/>",
            RIGHT - 160.0,
            y - 10.0
        )?;
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\" class=\"legend\">{}</text>",
            RIGHT - 144.0,
            escape(&s.name)
        )?;
    }

    writeln!(out, "</svg>")?;
    Ok(out)
}

/// Renders and writes a chart file.
pub fn write_line_chart(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<()> {
    let svg = render_line_chart(title, x_label, y_label, series)?;
    std::fs::write(path, svg)
        .map_err(|e| anyhow::anyhow!("writing chart {}: {e}", path.display()))
}
