//! Static figures: normalized infection-curve histograms with the fitted
//! Gamma density overlaid, one line per β, one figure per strategy. Each
//! figure is written as SVG and as a plain CSV of the plotted points.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::report::{format_sig, CellReport, Report};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Rounds `max` up to a 1-2-5 step and returns `(top, step)` for five ticks.
fn nice_axis(max: f64) -> (f64, f64) {
    let raw = (max / 5.0).max(1e-12);
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap();
    ((max / step).ceil().max(1.0) * step, step)
}

/// Renders the figure for every cell of `strategy`, ordered as in the report.
pub fn render_svg(report: &Report, strategy: &str) -> Result<String> {
    let cells: Vec<&CellReport> = report
        .cells
        .iter()
        .filter(|c| c.measure == strategy)
        .collect();
    if cells.is_empty() {
        return Err(Error::invalid(
            "strategy",
            format!("no cells for strategy `{strategy}`"),
        ));
    }
    let x_max = cells
        .iter()
        .flat_map(|c| c.curve.last().map(|p| p.0))
        .fold(1.0f64, f64::max)
        .ceil();
    let y_data = cells
        .iter()
        .flat_map(|c| {
            c.normalized
                .iter()
                .map(|p| p.1)
                .chain(c.curve.iter().map(|p| p.1))
        })
        .fold(0.0f64, f64::max);
    let (y_max, y_step) = nice_axis(y_data);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + x / x_max * plot_w;
    let sy = |y: f64| TOP + plot_h - y / y_max * plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">isolation: {}</text>"#,
        WIDTH / 2.0,
        escape(strategy)
    )
    .unwrap();

    // Axes, ticks and labels.
    let (x0, y0) = (sx(0.0), sy(0.0));
    writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{x0:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}"/><line x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{:.1}"/></g>"#,
        sx(x_max),
        sy(y_max)
    )
    .unwrap();
    let x_step = (x_max / 10.0).ceil().max(1.0);
    let mut x = 0.0;
    while x <= x_max + 1e-9 {
        writeln!(
            s,
            r#"<line x1="{0:.1}" y1="{y0:.1}" x2="{0:.1}" y2="{1:.1}" stroke="black"/><text x="{0:.1}" y="{2:.1}" text-anchor="middle">{3}</text>"#,
            sx(x),
            y0 + 5.0,
            y0 + 18.0,
            x
        )
        .unwrap();
        x += x_step;
    }
    let ticks = (y_max / y_step).round() as usize;
    for i in 0..=ticks {
        let y = i as f64 * y_step;
        writeln!(
            s,
            r#"<line x1="{0:.1}" y1="{1:.1}" x2="{x0:.1}" y2="{1:.1}" stroke="black"/><text x="{2:.1}" y="{3:.1}" text-anchor="end">{4:.3}</text>"#,
            x0 - 5.0,
            sy(y),
            x0 - 8.0,
            sy(y) + 4.0,
            y
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">iteration/distance</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{0:.1}" text-anchor="middle" transform="rotate(-90 16 {0:.1})">fitted PDF value</text>"#,
        TOP + plot_h / 2.0
    )
    .unwrap();

    // Bars: one slot per β inside each unit-wide distance bin.
    let slot = 0.8 / cells.len() as f64;
    for (i, cell) in cells.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        writeln!(s, r#"<g fill="{color}" fill-opacity="0.35" stroke="none">"#).unwrap();
        for &(d, mass) in &cell.normalized {
            let left = f64::from(d) - 0.4 + i as f64 * slot;
            writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
                sx(left),
                sy(mass),
                slot / x_max * plot_w,
                y0 - sy(mass)
            )
            .unwrap();
        }
        writeln!(s, "</g>").unwrap();
        let points: Vec<String> = cell
            .curve
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
    }

    // Legend.
    let legend_x = WIDTH - RIGHT - 170.0;
    for (i, cell) in cells.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = TOP + 10.0 + i as f64 * 18.0;
        writeln!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">β = {}, C = {:.3}</text>"#,
            legend_x,
            legend_x + 20.0,
            legend_x + 26.0,
            y + 4.0,
            cell.beta,
            cell.c_mean
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// The points behind [`render_svg`] as CSV rows `beta,series,x,y`, where
/// `series` is `bar` for a normalized histogram bin and `fit` for a sample of
/// the fitted density.
pub fn render_curve_csv(report: &Report, strategy: &str) -> Result<String> {
    let cells: Vec<&CellReport> = report
        .cells
        .iter()
        .filter(|c| c.measure == strategy)
        .collect();
    if cells.is_empty() {
        return Err(Error::invalid(
            "strategy",
            format!("no cells for strategy `{strategy}`"),
        ));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::Degenerate(format!("csv: {e}"));
    w.write_record(["beta", "series", "x", "y"])
        .map_err(to_err)?;
    for cell in cells {
        let beta = format_sig(Some(cell.beta));
        for &(d, mass) in &cell.normalized {
            w.write_record([
                beta.as_str(),
                "bar",
                &d.to_string(),
                &format_sig(Some(mass)),
            ])
            .map_err(to_err)?;
        }
        for &(x, y) in &cell.curve {
            w.write_record([
                beta.as_str(),
                "fit",
                &format_sig(Some(x)),
                &format_sig(Some(y)),
            ])
            .map_err(to_err)?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Degenerate(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `curve_<strategy>.svg` and `curve_<strategy>.csv` for every
/// strategy into `dir`.
pub fn emit_plots(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    if report.cells.is_empty() {
        return Err(Error::invalid("report", "nothing to plot"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for strategy in report.strategies() {
        let svg = dir.join(format!("curve_{strategy}.svg"));
        std::fs::write(&svg, render_svg(report, &strategy)?).map_err(|e| Error::io(&svg, e))?;
        let csv = dir.join(format!("curve_{strategy}.csv"));
        std::fs::write(&csv, render_curve_csv(report, &strategy)?)
            .map_err(|e| Error::io(&csv, e))?;
        written.push(svg);
        written.push(csv);
    }
    Ok(written)
}
