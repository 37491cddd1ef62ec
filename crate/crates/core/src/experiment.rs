//! Monte-Carlo sweeps over rewiring probability and isolation strategy.
//!
//! A sweep is a grid of cells, one per `(β, strategy)` pair. Every trial of
//! a cell generates a fresh Watts-Strogatz graph, measures its structure,
//! isolates the top-ranked nodes and records the infection curve from one
//! random seed node.
//!
//! Seeds depend on values, not positions in the sweep:
//!
//! ```text
//! graph_seed  = mix(mix(master_seed, β.to_bits()), trial)
//! source_seed = mix(graph_seed, strategy code)
//! ```
//!
//! so all strategies at one β see the same graphs (paired comparison), and
//! removing a cell from the sweep never changes another cell.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{parse_strategy, strategy_name, CentralityParams, Measure};
use crate::distfit::{fit_histogram, FitMethod, GammaParams};
use crate::epidemic::{self, aggregate, peak, DistanceHistogram, Isolation};
use crate::error::{Error, Result};
use crate::generators::WsParams;
use crate::metrics::{reference_values, structural_metrics, ReferenceMode, ReferenceValues};
use crate::rng::mix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub betas: Vec<f64>,
    /// Isolation strategies; `None` is the no-isolation baseline.
    pub measures: Vec<Option<Measure>>,
    pub isolation_fraction: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub reference_mode: ReferenceMode,
    pub fit_method: FitMethod,
    pub centrality: CentralityParams<f64>,
}

/// The seven measures followed by the `none` baseline.
pub fn all_strategies() -> Vec<Option<Measure>> {
    Measure::ALL
        .iter()
        .copied()
        .map(Some)
        .chain([None])
        .collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 100,
            k: 6,
            betas: vec![0.025, 0.05, 0.1, 0.2, 0.3],
            measures: all_strategies(),
            isolation_fraction: 0.15,
            trials: 100,
            master_seed: 42,
            reference_mode: ReferenceMode::Analytic,
            fit_method: FitMethod::Mle,
            centrality: CentralityParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        for &beta in &self.betas {
            WsParams::new(self.n, self.k, beta)?;
        }
        if !(0.0..1.0).contains(&self.isolation_fraction) {
            return Err(Error::invalid(
                "isolation_fraction",
                format!("{} outside [0, 1)", self.isolation_fraction),
            ));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials", "need at least one trial"));
        }
        Ok(())
    }

    /// Parses the declarative config file format; see [`ConfigPatch`].
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let patch: ConfigPatch = toml::from_str(text).map_err(|e| Error::Parse {
            line: e
                .span()
                .map_or(0, |s| text[..s.start].lines().count().max(1)),
            message: e.message().to_string(),
        })?;
        let config = patch.apply(Self::default())?;
        config.validate()?;
        Ok(config)
    }

    /// Compact description used in file headers.
    pub fn fingerprint(&self) -> String {
        let betas: Vec<String> = self.betas.iter().map(|b| b.to_string()).collect();
        let measures: Vec<&str> = self.measures.iter().map(|&m| strategy_name(m)).collect();
        let reference = match self.reference_mode {
            ReferenceMode::Analytic => "analytic".to_string(),
            ReferenceMode::Empirical { samples, seed } => format!("empirical:{samples}:{seed}"),
        };
        format!(
            "n={};k={};beta={};measures={};isolation={};trials={};seed={};reference={};fit={}",
            self.n,
            self.k,
            betas.join(","),
            measures.join(","),
            self.isolation_fraction,
            self.trials,
            self.master_seed,
            reference,
            match self.fit_method {
                FitMethod::Mle => "mle",
                FitMethod::Mom => "mom",
            }
        )
    }
}

/// Sectioned `key = value` overrides. Every field is optional; unknown
/// keys are rejected.
///
/// ```toml
/// [network]
/// n = 100
/// k = 6
///
/// [sweep]
/// betas = [0.025, 0.05, 0.1, 0.2, 0.3]
/// measures = ["all"]
/// isolation = 0.15
/// trials = 100
/// seed = 42
///
/// [analysis]
/// reference = "analytic"   # or "empirical"
/// reference_samples = 20
/// fit = "mle"              # or "mom"
/// damping = 0.85
/// katz_alpha = 0.05        # default: 0.9 / spectral radius
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigPatch {
    #[serde(default)]
    pub network: NetworkPatch,
    #[serde(default)]
    pub sweep: SweepPatch,
    #[serde(default)]
    pub analysis: AnalysisPatch,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkPatch {
    pub n: Option<usize>,
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPatch {
    pub betas: Option<Vec<f64>>,
    /// Strategy names, or `"all"`.
    pub measures: Option<Vec<String>>,
    pub isolation: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisPatch {
    pub reference: Option<String>,
    pub reference_samples: Option<usize>,
    pub fit: Option<String>,
    pub damping: Option<f64>,
    pub katz_alpha: Option<f64>,
}

/// Expands strategy names; `all` becomes the seven measures plus `none`.
pub fn parse_strategies<S: AsRef<str>>(names: &[S]) -> Result<Vec<Option<Measure>>> {
    let mut out = Vec::new();
    for name in names {
        match name.as_ref() {
            "all" => out.extend(all_strategies()),
            other => out.push(parse_strategy(other)?),
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|m| seen.insert(*m));
    Ok(out)
}

impl ConfigPatch {
    pub fn apply(&self, mut config: ExperimentConfig) -> Result<ExperimentConfig> {
        if let Some(n) = self.network.n {
            config.n = n;
        }
        if let Some(k) = self.network.k {
            config.k = k;
        }
        let sweep = &self.sweep;
        if let Some(b) = &sweep.betas {
            config.betas = b.clone();
        }
        if let Some(m) = &sweep.measures {
            config.measures = parse_strategies(m)?;
        }
        if let Some(f) = sweep.isolation {
            config.isolation_fraction = f;
        }
        if let Some(t) = sweep.trials {
            config.trials = t;
        }
        if let Some(s) = sweep.seed {
            config.master_seed = s;
        }
        let analysis = &self.analysis;
        let samples = analysis.reference_samples;
        match (analysis.reference.as_deref(), &mut config.reference_mode) {
            (Some("analytic"), mode) => *mode = ReferenceMode::Analytic,
            (Some("empirical"), mode) => {
                *mode = ReferenceMode::Empirical {
                    samples: samples.unwrap_or(20),
                    seed: mix(config.master_seed, u64::MAX),
                }
            }
            (Some(other), _) => {
                return Err(Error::invalid(
                    "reference",
                    format!("`{other}` is neither analytic nor empirical"),
                ))
            }
            (None, ReferenceMode::Empirical { samples: s, .. }) => {
                if let Some(v) = samples {
                    *s = v;
                }
            }
            (None, ReferenceMode::Analytic) => {}
        }
        if let Some(fit) = analysis.fit.as_deref() {
            config.fit_method = match fit {
                "mle" => FitMethod::Mle,
                "mom" => FitMethod::Mom,
                other => {
                    return Err(Error::invalid(
                        "fit",
                        format!("`{other}` is neither mle nor mom"),
                    ))
                }
            };
        }
        if let Some(d) = analysis.damping {
            config.centrality.damping = d;
        }
        if let Some(a) = analysis.katz_alpha {
            config.centrality.katz_alpha = Some(a);
        }
        Ok(config)
    }
}

/// Aggregated outcome of one `(β, strategy)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub beta: f64,
    pub measure: Option<Measure>,
    /// Mean characteristic path length of the intact graphs.
    pub l_mean: Option<f64>,
    pub c_mean: f64,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub s3: Option<f64>,
    /// Mean fraction of disconnected ordered pairs in the intact graphs.
    pub disconnected_frac: f64,
    pub histogram: DistanceHistogram,
    pub peak_distance: u32,
    pub peak_count: u64,
    pub gamma: GammaParams<f64>,
    pub unreachable_frac: f64,
    #[serde(skip)]
    pub wall_time: WallTime,
}

/// Elapsed time of a cell. Timings vary run to run, so they compare equal
/// and are never serialized.
#[derive(Debug, Clone, Copy, Default)]
pub struct WallTime(pub Duration);

impl PartialEq for WallTime {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub references: ReferenceValues<f64>,
    pub cells: Vec<CellResult>,
}

impl ExperimentResult {
    pub fn cell(&self, beta: f64, measure: Option<Measure>) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.beta == beta && c.measure == measure)
    }
}

pub fn graph_seed(master: u64, beta: f64, trial: usize) -> u64 {
    mix(mix(master, beta.to_bits()), trial as u64)
}

pub fn source_seed(graph_seed: u64, measure: Option<Measure>) -> u64 {
    mix(graph_seed, Measure::code(measure))
}

struct TrialOutput {
    histogram: DistanceHistogram,
    l: Option<f64>,
    c: f64,
    s: [Option<f64>; 3],
    disconnected: f64,
}

fn run_one(
    config: &ExperimentConfig,
    refs: &ReferenceValues<f64>,
    beta: f64,
    measure: Option<Measure>,
    trial: usize,
) -> Result<TrialOutput> {
    let params = WsParams::new(config.n, config.k, beta)?;
    let isolation = match measure {
        None => Isolation::NONE,
        Some(m) => Isolation {
            measure: Some(m),
            fraction: config.isolation_fraction,
        },
    };
    let gseed = graph_seed(config.master_seed, beta, trial);
    let trial = epidemic::run_trial(
        &params,
        &isolation,
        &config.centrality,
        gseed,
        source_seed(gseed, measure),
    )?;
    let metrics = structural_metrics(&trial.graph, refs);
    let sw = metrics.small_worldness;
    Ok(TrialOutput {
        histogram: trial.histogram,
        l: metrics.path_length.mean,
        c: metrics.clustering,
        s: [sw.s1, sw.s2, sw.s3],
        disconnected: metrics.path_length.disconnected_fraction(),
    })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Mean over trials, undefined if any trial is.
fn mean_all(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let collected: Option<Vec<f64>> = values.collect();
    collected.and_then(|v| mean(v.into_iter()))
}

fn run_cell(
    config: &ExperimentConfig,
    refs: &ReferenceValues<f64>,
    beta: f64,
    measure: Option<Measure>,
) -> Result<CellResult> {
    let start = Instant::now();
    let outputs: Vec<TrialOutput> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_one(config, refs, beta, measure, t))
        .collect::<Result<_>>()?;
    let histogram = aggregate(outputs.iter().map(|o| &o.histogram))?;
    let (peak_distance, peak_count) = peak(&histogram)?;
    let gamma = fit_histogram(&histogram, config.fit_method)?;
    let unreachable_frac = if histogram.susceptible_total == 0 {
        0.0
    } else {
        histogram.unreachable_total as f64 / histogram.susceptible_total as f64
    };
    Ok(CellResult {
        beta,
        measure,
        l_mean: mean(outputs.iter().filter_map(|o| o.l)),
        c_mean: mean(outputs.iter().map(|o| o.c)).unwrap_or(0.0),
        s1: mean_all(outputs.iter().map(|o| o.s[0])),
        s2: mean_all(outputs.iter().map(|o| o.s[1])),
        s3: mean_all(outputs.iter().map(|o| o.s[2])),
        disconnected_frac: mean(outputs.iter().map(|o| o.disconnected)).unwrap_or(0.0),
        histogram,
        peak_distance,
        peak_count,
        gamma,
        unreachable_frac,
        wall_time: WallTime(start.elapsed()),
    })
}

/// Runs every cell of the sweep on the current rayon pool. Output does not
/// depend on the number of threads.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let references = reference_values(config.n, config.k, config.reference_mode)?;
    let grid: Vec<(f64, Option<Measure>)> = config
        .betas
        .iter()
        .flat_map(|&b| config.measures.iter().map(move |&m| (b, m)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(beta, measure)| {
            run_cell(config, &references, beta, measure).map_err(|e| Error::Cell {
                beta,
                measure: strategy_name(measure).to_string(),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentResult {
        config: config.clone(),
        references,
        cells,
    })
}

/// [`run_experiment`] on a dedicated pool with `threads` workers.
pub fn run_experiment_with_threads(
    config: &ExperimentConfig,
    threads: usize,
) -> Result<ExperimentResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid("threads", e.to_string()))?;
    pool.install(|| run_experiment(config))
}

/// One strategy's peak relative to the no-isolation baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatteningEntry {
    pub measure: Option<Measure>,
    pub peak_count: u64,
    /// `peak / baseline peak`; below 1 means a flatter curve.
    pub reduction_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaComparison {
    pub beta: f64,
    pub baseline_peak: u64,
    /// Ascending peak count, ties in strategy order.
    pub entries: Vec<FlatteningEntry>,
}

/// Ranks isolation strategies by peak count at each β.
pub fn compare_flattening(result: &ExperimentResult) -> Result<Vec<BetaComparison>> {
    let mut betas: Vec<f64> = Vec::new();
    for c in &result.cells {
        if !betas.contains(&c.beta) {
            betas.push(c.beta);
        }
    }
    let mut out = Vec::with_capacity(betas.len());
    for beta in betas {
        let baseline = result.cell(beta, None).ok_or_else(|| {
            Error::Degenerate(format!("no `none` baseline cell at beta = {beta}"))
        })?;
        let mut entries: Vec<FlatteningEntry> = result
            .cells
            .iter()
            .filter(|c| c.beta == beta)
            .map(|c| FlatteningEntry {
                measure: c.measure,
                peak_count: c.peak_count,
                reduction_ratio: c.peak_count as f64 / baseline.peak_count as f64,
            })
            .collect();
        if entries.iter().filter(|e| e.measure.is_some()).count() < 2 {
            return Err(Error::Degenerate(format!(
                "need at least two centrality cells at beta = {beta}"
            )));
        }
        entries.sort_by_key(|e| e.peak_count);
        out.push(BetaComparison {
            beta,
            baseline_peak: baseline.peak_count,
            entries,
        });
    }
    Ok(out)
}
