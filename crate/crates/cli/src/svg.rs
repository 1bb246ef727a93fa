//! Standalone SVG line charts, deterministic to the byte for identical
//! input tables.
//!
//! One polyline per y-column per curve group, where a group is one
//! combination of the axis columns other than the x axis (so a table swept
//! over (V1, w1) plotted against w1 draws one curve per V1 value).

use std::fmt::Write as _;
use std::path::Path;

use starwire::SweepTable;

use crate::runner::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 48.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Round `span/slots` up to a 1/2/5 × 10^m tick step.
fn nice_step(span: f64, slots: f64) -> f64 {
    let raw = span / slots;
    let mag = 10f64.powf(raw.abs().log10().floor());
    let norm = raw / mag;
    let factor = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * mag
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let text = format!("{v:.6}");
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() || trimmed == "-" {
        "0".into()
    } else {
        trimmed.to_string()
    }
}

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Render a line chart of `y_columns` against `x_column`.
pub fn svg_text(table: &SweepTable, x_column: &str, y_columns: &[&str]) -> Result<String, CliError> {
    let x_index = table
        .column_index(x_column)
        .ok_or_else(|| CliError::Config(format!("no column named '{x_column}' to plot")))?;
    let y_indices: Vec<usize> = y_columns
        .iter()
        .map(|name| {
            table
                .column_index(name)
                .ok_or_else(|| CliError::Config(format!("no column named '{name}' to plot")))
        })
        .collect::<Result<_, _>>()?;
    if table.rows.is_empty() {
        return Err(CliError::Numeric("refusing to plot an empty table".into()));
    }

    // Group rows by the axis columns that are not the x axis, preserving
    // first-appearance order.
    let group_axes: Vec<usize> = (0..table.axis_labels.len())
        .filter(|&i| i != x_index)
        .collect();
    let mut group_keys: Vec<Vec<u64>> = Vec::new();
    let mut groups: Vec<Vec<&Vec<f64>>> = Vec::new();
    for row in &table.rows {
        let key: Vec<u64> = group_axes.iter().map(|&i| row[i].to_bits()).collect();
        match group_keys.iter().position(|k| *k == key) {
            Some(g) => groups[g].push(row),
            None => {
                group_keys.push(key);
                groups.push(vec![row]);
            }
        }
    }

    let finite = |v: f64| v.is_finite();
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for row in &table.rows {
        if finite(row[x_index]) {
            x_min = x_min.min(row[x_index]);
            x_max = x_max.max(row[x_index]);
        }
        for &yi in &y_indices {
            if finite(row[yi]) {
                y_min = y_min.min(row[yi]);
                y_max = y_max.max(row[yi]);
            }
        }
    }
    if !(x_min.is_finite() && y_min.is_finite()) {
        return Err(CliError::Numeric("no finite data to plot".into()));
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
        y_min -= 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |v: f64| MARGIN_LEFT + (v - x_min) / (x_max - x_min) * plot_w;
    let sy = |v: f64| MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // Axes and ticks.
    let x0 = coord(MARGIN_LEFT);
    let x1 = coord(WIDTH - MARGIN_RIGHT);
    let y0 = coord(HEIGHT - MARGIN_BOTTOM);
    let y1 = coord(MARGIN_TOP);
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );

    let x_step = nice_step(x_max - x_min, 6.0);
    let mut tick = (x_min / x_step).ceil() * x_step;
    while tick <= x_max + 1e-12 * x_step {
        let px = coord(sx(tick));
        let _ = writeln!(
            out,
            "<line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>",
            coord(HEIGHT - MARGIN_BOTTOM + 5.0)
        );
        let _ = writeln!(
            out,
            "<text x=\"{px}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{}</text>",
            coord(HEIGHT - MARGIN_BOTTOM + 20.0),
            format_tick(tick)
        );
        tick += x_step;
    }

    let y_step = nice_step(y_max - y_min, 6.0);
    let mut tick = (y_min / y_step).ceil() * y_step;
    while tick <= y_max + 1e-12 * y_step {
        let py = coord(sy(tick));
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{x0}\" y2=\"{py}\" stroke=\"black\"/>",
            coord(MARGIN_LEFT - 5.0)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{py}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\" dominant-baseline=\"middle\">{}</text>",
            coord(MARGIN_LEFT - 9.0),
            format_tick(tick)
        );
        tick += y_step;
    }

    // Axis labels.
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{x_column}</text>",
        coord(MARGIN_LEFT + plot_w / 2.0),
        coord(HEIGHT - 8.0)
    );
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>",
        coord(MARGIN_TOP + plot_h / 2.0),
        coord(MARGIN_TOP + plot_h / 2.0),
        y_columns.join(", ")
    );

    // Curves.
    let mut color = 0usize;
    for rows in &groups {
        for &yi in &y_indices {
            let mut points = String::new();
            for row in rows {
                if finite(row[x_index]) && finite(row[yi]) {
                    let _ = write!(points, "{},{} ", coord(sx(row[x_index])), coord(sy(row[yi])));
                }
            }
            let _ = writeln!(
                out,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
                PALETTE[color % PALETTE.len()],
                points.trim_end()
            );
            color += 1;
        }
    }

    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_svg(
    table: &SweepTable,
    x_column: &str,
    y_columns: &[&str],
    path: &Path,
) -> Result<(), CliError> {
    let text = svg_text(table, x_column, y_columns)?;
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
