//! Result files: the per-cell CSV summary and the JSON report carrying full
//! histograms and fitted curve points.
//!
//! Every real number is rounded to six significant digits before it is
//! written, so a report read back from JSON re-serializes byte for byte.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::centrality::{parse_strategy, strategy_name};
use crate::distfit::{curve_points, GammaParams};
use crate::epidemic::{normalize, DistanceHistogram};
use crate::error::{Error, Result};
use crate::experiment::{CellResult, ExperimentResult};

pub const SIGNIFICANT_DIGITS: usize = 6;

pub const CSV_HEADER: [&str; 14] = [
    "beta",
    "measure",
    "L_mean",
    "C_mean",
    "S1",
    "S2",
    "S3",
    "peak_distance",
    "peak_count",
    "gamma_a",
    "gamma_b",
    "unreachable_frac",
    "trials",
    "seed",
];

/// Rounds to [`SIGNIFICANT_DIGITS`] significant decimal digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap()
}

/// Shortest decimal rendering of `round_sig(x)`; `NA` for undefined values.
pub fn format_sig(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => {
            let r = round_sig(v);
            let abs = r.abs();
            if abs != 0.0 && !(1e-5..1e15).contains(&abs) {
                format!("{r:e}")
            } else {
                format!("{r}")
            }
        }
        _ => "NA".to_string(),
    }
}

/// One cell as stored in the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub beta: f64,
    pub measure: String,
    #[serde(rename = "L_mean")]
    pub l_mean: Option<f64>,
    #[serde(rename = "C_mean")]
    pub c_mean: f64,
    #[serde(rename = "S1")]
    pub s1: Option<f64>,
    #[serde(rename = "S2")]
    pub s2: Option<f64>,
    #[serde(rename = "S3")]
    pub s3: Option<f64>,
    pub disconnected_frac: f64,
    pub peak_distance: u32,
    pub peak_count: u64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub log_likelihood: Option<f64>,
    pub unreachable_frac: f64,
    pub trials: u64,
    pub histogram: DistanceHistogram,
    /// `(distance, mass)` of the histogram normalized to unit mass.
    pub normalized: Vec<(u32, f64)>,
    /// `(x, f(x))` samples of the fitted density.
    pub curve: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    pub k: usize,
    pub isolation_fraction: f64,
    pub trials: usize,
    pub seed: u64,
    pub fingerprint: String,
    pub cells: Vec<CellReport>,
}

/// Grid on which fitted curves are sampled: quarter steps out to two hops
/// past the furthest observed distance.
pub fn curve_grid(max_distance: u32) -> Vec<f64> {
    (1..=4 * (max_distance + 2))
        .map(|i| f64::from(i) * 0.25)
        .collect()
}

fn opt(x: Option<f64>) -> Option<f64> {
    x.map(round_sig)
}

impl CellReport {
    pub fn from_cell(cell: &CellResult) -> Result<Self> {
        let gamma: &GammaParams<f64> = &cell.gamma;
        let max_distance = cell.histogram.counts.len() as u32;
        let curve = curve_points(gamma, &curve_grid(max_distance))?
            .into_iter()
            .map(|(x, y)| (round_sig(x), round_sig(y)))
            .collect();
        let normalized = normalize::<f64>(&cell.histogram)?
            .into_iter()
            .map(|(d, p)| (d, round_sig(p)))
            .collect();
        Ok(Self {
            beta: round_sig(cell.beta),
            measure: strategy_name(cell.measure).to_string(),
            l_mean: opt(cell.l_mean),
            c_mean: round_sig(cell.c_mean),
            s1: opt(cell.s1),
            s2: opt(cell.s2),
            s3: opt(cell.s3),
            disconnected_frac: round_sig(cell.disconnected_frac),
            peak_distance: cell.peak_distance,
            peak_count: cell.peak_count,
            gamma_a: round_sig(gamma.shape),
            gamma_b: round_sig(gamma.scale),
            log_likelihood: opt(gamma.diagnostics.map(|d| d.log_likelihood)),
            unreachable_frac: round_sig(cell.unreachable_frac),
            trials: cell.histogram.trials,
            histogram: cell.histogram.clone(),
            normalized,
            curve,
        })
    }

    pub fn csv_row(&self, seed: u64) -> Vec<String> {
        vec![
            format_sig(Some(self.beta)),
            self.measure.clone(),
            format_sig(self.l_mean),
            format_sig(Some(self.c_mean)),
            format_sig(self.s1),
            format_sig(self.s2),
            format_sig(self.s3),
            self.peak_distance.to_string(),
            self.peak_count.to_string(),
            format_sig(Some(self.gamma_a)),
            format_sig(Some(self.gamma_b)),
            format_sig(Some(self.unreachable_frac)),
            self.trials.to_string(),
            seed.to_string(),
        ]
    }
}

impl Report {
    pub fn from_result(result: &ExperimentResult) -> Result<Self> {
        let config = &result.config;
        Ok(Self {
            n: config.n,
            k: config.k,
            isolation_fraction: round_sig(config.isolation_fraction),
            trials: config.trials,
            seed: config.master_seed,
            fingerprint: config.fingerprint(),
            cells: result
                .cells
                .iter()
                .map(CellReport::from_cell)
                .collect::<Result<_>>()?,
        })
    }

    /// Distinct strategies in first-seen order.
    pub fn strategies(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.measure) {
                out.push(c.measure.clone());
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_err = |e: csv::Error| Error::Degenerate(format!("csv: {e}"));
        w.write_record(CSV_HEADER).map_err(to_err)?;
        for cell in &self.cells {
            w.write_record(cell.csv_row(self.seed)).map_err(to_err)?;
        }
        w.flush()
            .map_err(|e| Error::Degenerate(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)
            .map_err(|e| Error::Degenerate(format!("json: {e}")))?;
        out.write_all(b"\n")
            .map_err(|e| Error::Degenerate(format!("json: {e}")))
    }

    pub fn read_json<R: std::io::Read>(input: R) -> Result<Self> {
        let report: Report = serde_json::from_reader(input).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        for c in &report.cells {
            parse_strategy(&c.measure)?;
        }
        Ok(report)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes the CSV summary to `path`.
pub fn emit_csv(report: &Report, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    report.write_csv(&mut w).map_err(|e| match e {
        Error::Degenerate(m) => Error::io(path, std::io::Error::other(m)),
        other => other,
    })?;
    finish(w, path)
}

/// Writes the JSON report to `path`.
pub fn emit_json(report: &Report, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    report.write_json(&mut w).map_err(|e| match e {
        Error::Degenerate(m) => Error::io(path, std::io::Error::other(m)),
        other => other,
    })?;
    finish(w, path)
}

pub fn read_json_file(path: &Path) -> Result<Report> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Report::read_json(BufReader::new(file))
}
