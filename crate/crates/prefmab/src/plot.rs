//! Minimal self-contained SVG line charts. Output is a pure function of
//! the input series (fixed-precision coordinates), so charts are
//! byte-stable across runs and machines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metrics::{aggregate, AlgorithmSummary, TrialRecord};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 65.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
/// Curves are thinned to at most this many points before rendering.
const MAX_POINTS: usize = 400;

pub struct Series {
    pub name: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Optional symmetric band half-widths (e.g. one standard deviation).
    pub band: Option<Vec<f64>>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

fn fmt_tick(v: f64) -> String {
    let text = format!("{v:.3}");
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

fn thin(idx: usize, len: usize) -> bool {
    if len <= MAX_POINTS {
        return true;
    }
    let stride = len.div_ceil(MAX_POINTS);
    idx.is_multiple_of(stride) || idx == len - 1
}

/// Renders labelled series as polylines with optional bands and a legend.
/// An empty series list yields a valid chart with axes and an empty plot
/// region.
pub fn render_line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<String> {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        if s.xs.len() != s.ys.len() || s.xs.is_empty() {
            return Err(Error::EmptyInput("series must have matching non-empty xs and ys"));
        }
        for (i, (&x, &y)) in s.xs.iter().zip(&s.ys).enumerate() {
            let half = s.band.as_ref().map_or(0.0, |b| b[i]);
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y - half);
            y_max = y_max.max(y + half);
        }
    }
    if series.is_empty() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    y_min = y_min.min(0.0);
    if (x_max - x_min).abs() < f64::EPSILON {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min).abs() < f64::EPSILON {
        y_max = y_min + 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">{}</text>",
        fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        escape(title)
    );

    // Axes, ticks, grid.
    for k in 0..=4 {
        let fx = x_min + (x_max - x_min) * k as f64 / 4.0;
        let fy = y_min + (y_max - y_min) * k as f64 / 4.0;
        let px = sx(fx);
        let py = sy(fy);
        let _ = writeln!(
            svg,
            "<line x1=\"{x}\" y1=\"{top}\" x2=\"{x}\" y2=\"{bot}\" stroke=\"#dddddd\"/>",
            x = fmt_coord(px),
            top = fmt_coord(MARGIN_TOP),
            bot = fmt_coord(MARGIN_TOP + plot_h)
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{l}\" y1=\"{y}\" x2=\"{r}\" y2=\"{y}\" stroke=\"#dddddd\"/>",
            l = fmt_coord(MARGIN_LEFT),
            r = fmt_coord(MARGIN_LEFT + plot_w),
            y = fmt_coord(py)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            fmt_coord(px),
            fmt_coord(MARGIN_TOP + plot_h + 20.0),
            fmt_tick(fx)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            fmt_coord(MARGIN_LEFT - 8.0),
            fmt_coord(py + 4.0),
            fmt_tick(fy)
        );
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\"/>",
        fmt_coord(MARGIN_LEFT),
        fmt_coord(MARGIN_TOP),
        fmt_coord(plot_w),
        fmt_coord(plot_h)
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        fmt_coord(HEIGHT - 18.0),
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"22\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 22 {})\">{}</text>",
        fmt_coord(MARGIN_TOP + plot_h / 2.0),
        fmt_coord(MARGIN_TOP + plot_h / 2.0),
        escape(y_label)
    );

    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let len = s.xs.len();
        if let Some(band) = &s.band {
            let mut points = String::new();
            for i in (0..len).filter(|&i| thin(i, len)) {
                let _ = write!(points, "{},{} ", fmt_coord(sx(s.xs[i])), fmt_coord(sy(s.ys[i] + band[i])));
            }
            for i in (0..len).rev().filter(|&i| thin(i, len)) {
                let _ = write!(points, "{},{} ", fmt_coord(sx(s.xs[i])), fmt_coord(sy(s.ys[i] - band[i])));
            }
            let _ = writeln!(
                svg,
                "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>",
                points.trim_end()
            );
        }
        let mut points = String::new();
        for i in (0..len).filter(|&i| thin(i, len)) {
            let _ = write!(points, "{},{} ", fmt_coord(sx(s.xs[i])), fmt_coord(sy(s.ys[i])));
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            points.trim_end()
        );
        let ly = MARGIN_TOP + 16.0 + 20.0 * si as f64;
        let _ = writeln!(
            svg,
            "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"3\"/>",
            x1 = fmt_coord(MARGIN_LEFT + plot_w + 12.0),
            x2 = fmt_coord(MARGIN_LEFT + plot_w + 36.0),
            y = fmt_coord(ly)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
            fmt_coord(MARGIN_LEFT + plot_w + 42.0),
            fmt_coord(ly + 4.0),
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Mean cumulative-regret curves with one-standard-deviation bands.
pub fn render_regret_chart(summaries: &[AlgorithmSummary]) -> Result<String> {
    let series: Vec<Series> = summaries
        .iter()
        .map(|s| Series {
            name: s.name.clone(),
            xs: (1..=s.mean_curve.len()).map(|t| t as f64).collect(),
            ys: s.mean_curve.clone(),
            band: Some(s.std_curve.clone()),
        })
        .collect();
    render_line_chart("Cumulative regret", "round", "cumulative regret", &series)
}

/// One parsed results.csv data row.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultsRow {
    pub algorithm: String,
    pub trial: u32,
    pub t: usize,
    pub increment: f64,
    pub cumulative: f64,
}

pub fn parse_results_csv(text: &str) -> Result<Vec<ResultsRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "algorithm,trial,t,increment,cumulative")) => {}
        Some((_, header)) => {
            return Err(Error::MalformedRow {
                row: 1,
                reason: format!("unexpected header '{header}'"),
            })
        }
        None => return Err(Error::EmptyInput("results csv has no header")),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let row = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::MalformedRow {
                row,
                reason: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let parse_err = |what: &str, value: &str| Error::MalformedRow {
            row,
            reason: format!("bad {what} '{value}'"),
        };
        rows.push(ResultsRow {
            algorithm: fields[0].to_string(),
            trial: fields[1].parse().map_err(|_| parse_err("trial", fields[1]))?,
            t: fields[2].parse().map_err(|_| parse_err("t", fields[2]))?,
            increment: fields[3].parse().map_err(|_| parse_err("increment", fields[3]))?,
            cumulative: fields[4].parse().map_err(|_| parse_err("cumulative", fields[4]))?,
        });
    }
    Ok(rows)
}

/// Rebuilds per-trial curves from a results.csv dump and renders the
/// aggregated regret chart.
pub fn regret_chart_from_csv(text: &str) -> Result<String> {
    let rows = parse_results_csv(text)?;
    let mut records: Vec<TrialRecord> = Vec::new();
    for row in rows {
        let matches = |r: &TrialRecord| r.algorithm == row.algorithm && r.trial == row.trial;
        // Rows arrive grouped by (algorithm, trial), so the open record is
        // almost always the last one; fall back to a scan for stray input.
        let position = match records.last().map(&matches) {
            Some(true) => Some(records.len() - 1),
            _ => records.iter().position(matches),
        };
        let record = match position {
            Some(i) => &mut records[i],
            None => {
                records.push(TrialRecord {
                    algorithm: row.algorithm.clone(),
                    trial: row.trial,
                    increments: Vec::new(),
                    cumulative: Vec::new(),
                    per_user_cumulative: Vec::new(),
                    pref_error: None,
                });
                records.last_mut().expect("just pushed")
            }
        };
        record.increments.push(row.increment);
        record.cumulative.push(row.cumulative);
    }
    render_regret_chart(&aggregate(&records)?)
}
