//! Command-line front end for `curveflat`.
//!
//! Exit codes: 0 success, 2 usage error, 3 runtime or convergence error,
//! 4 IO error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use curveflat::centrality::{self, parse_strategy, strategy_name, Measure};
use curveflat::epidemic::{self, isolate, spread_from, DistanceHistogram};
use curveflat::experiment::{graph_seed, run_experiment, run_experiment_with_threads, ConfigPatch};
use curveflat::generators::watts_strogatz;
use curveflat::metrics::{reference_values, structural_metrics, ReferenceMode};
use curveflat::report::{emit_csv, emit_json, format_sig, read_json_file, Report};
use curveflat::rng::{mix, rng_from_seed};
use curveflat::{plot, CentralityParams, Error, ExperimentConfig, Graph, WsParams};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "CURVEFLAT_THREADS";

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "curveflat",
    version,
    about = "Small-world epidemic spread and infection-curve flattening"
)]
pub struct Cli {
    /// More progress output on stderr; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    /// Only print errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Generate a Watts-Strogatz graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Clustering, path length and small-worldness of one graph.
    Metrics(MetricsArgs),
    /// Score every node of one graph with a centrality measure.
    Centrality(CentralityArgs),
    /// New infections per iteration from a single seed node.
    Spread(SpreadArgs),
    /// Run a Monte-Carlo sweep over β and isolation strategies.
    Experiment(ExperimentArgs),
    /// Render SVG and CSV curve plots from a JSON report.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Analytic,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitArg {
    Mle,
    Mom,
}

/// Where a single graph comes from: an edge-list file, or a generated
/// Watts-Strogatz graph identical to trial `--trial` of an experiment with
/// the same `--seed` and `--beta`.
#[derive(Debug, Clone, PartialEq, Args)]
pub struct GraphArgs {
    /// Read the graph from an edge-list file instead of generating it.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Number of nodes.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Mean degree (even).
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    /// Rewiring probability.
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    /// Master seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Trial index whose graph to reproduce.
    #[arg(long, default_value_t = 0)]
    pub trial: usize,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// How random and lattice reference values are obtained. `--k` sets
    /// the reference degree, also for `--input` graphs.
    #[arg(long, value_enum, default_value_t = ReferenceArg::Analytic)]
    pub reference: ReferenceArg,
    /// Sampled random graphs for empirical references.
    #[arg(long, default_value_t = 20)]
    pub reference_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CentralityArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// degree, betweenness, closeness, katz, pagerank, exf or eigenvector.
    #[arg(long, value_parser = parse_measure, default_value = "degree")]
    pub measure: Measure,
    /// Also list the nodes an isolation of this fraction would select.
    #[arg(long)]
    pub top: Option<f64>,
    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    /// Katz attenuation; 0.9 / spectral radius when absent.
    #[arg(long)]
    pub katz_alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SpreadArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Infection seed node, in original ids.
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    /// Fraction of nodes to isolate before the spread.
    #[arg(long, default_value_t = 0.0)]
    pub isolate: f64,
    /// Measure that ranks nodes for isolation, or `none`.
    #[arg(long, value_parser = parse_strategy_name, default_value = "none")]
    pub centrality: String,
}

/// Sweep settings. Values are resolved as built-in default, then `--config`
/// file, then flags. Built-in defaults: n 100, k 6, beta
/// 0.025,0.05,0.1,0.2,0.3, isolate 0.15, centrality all, trials 100, seed
/// 42, reference analytic, fit mle, damping 0.85.
#[derive(Debug, Clone, PartialEq, Args)]
pub struct ExperimentArgs {
    /// TOML config file with [network], [sweep] and [analysis] sections.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of nodes [default: 100].
    #[arg(long)]
    pub n: Option<usize>,
    /// Mean degree, even [default: 6].
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated rewiring probabilities [default: 0.025,0.05,0.1,0.2,0.3].
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub beta: Option<Vec<f64>>,
    /// Fraction of nodes isolated in each non-baseline cell [default: 0.15].
    #[arg(long)]
    pub isolate: Option<f64>,
    /// Comma-separated strategies, `all`, or `none` [default: all].
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_strategy_list_item)]
    pub centrality: Option<Vec<String>>,
    /// Monte-Carlo trials per cell [default: 100].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reference values for small-worldness [default: analytic].
    #[arg(long, value_enum)]
    pub reference: Option<ReferenceArg>,
    /// Sampled random graphs for empirical references [default: 20].
    #[arg(long)]
    pub reference_samples: Option<usize>,
    /// Gamma fitting method [default: mle].
    #[arg(long, value_enum)]
    pub fit: Option<FitArg>,
    /// PageRank damping factor [default: 0.85].
    #[arg(long)]
    pub damping: Option<f64>,
    /// Katz attenuation [default: 0.9 / spectral radius].
    #[arg(long)]
    pub katz_alpha: Option<f64>,
    /// CSV summary path [default: none written].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// JSON report path [default: none written].
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Directory for per-strategy SVG and CSV plots [default: none written].
    #[arg(long, value_name = "DIR")]
    pub plot: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct PlotArgs {
    /// JSON report written by `experiment --json`.
    #[arg(long, value_name = "PATH")]
    pub json: PathBuf,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "plots")]
    pub out: PathBuf,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse::<Measure>().map_err(|e| e.to_string())
}

fn parse_strategy_name(s: &str) -> Result<String, String> {
    parse_strategy(s)
        .map(|m| strategy_name(m).to_string())
        .map_err(|e| e.to_string())
}

fn parse_strategy_list_item(s: &str) -> Result<String, String> {
    if s == "all" {
        Ok(s.to_string())
    } else {
        parse_strategy_name(s)
    }
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = exit_code(&e);
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Exit code for a library error: bad inputs are usage errors, failed
/// numerics are runtime errors.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::InvalidParameter { .. }
        | Error::NodeOutOfRange { .. }
        | Error::SelfLoop(_)
        | Error::Parse { .. }
        | Error::EmptyGraph => EXIT_USAGE,
        Error::NotConverged { .. } | Error::Degenerate(_) => EXIT_RUNTIME,
        Error::Cell { source, .. } => exit_code(source),
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

/// Rejects flag combinations clap cannot express.
pub fn validate(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Spread(a) => {
            if !(0.0..1.0).contains(&a.isolate) {
                return Err(CliError::usage(format!(
                    "--isolate {} must lie in [0, 1)",
                    a.isolate
                )));
            }
            if a.isolate > 0.0 && a.centrality == "none" {
                return Err(CliError::usage(
                    "--isolate > 0 needs a --centrality other than none",
                ));
            }
        }
        Command::Centrality(a) => {
            if let Some(t) = a.top {
                if !(0.0..1.0).contains(&t) {
                    return Err(CliError::usage(format!("--top {t} must lie in [0, 1)")));
                }
            }
        }
        Command::Experiment(a) => {
            if let Some(f) = a.isolate {
                if !(0.0..1.0).contains(&f) {
                    return Err(CliError::usage(format!("--isolate {f} must lie in [0, 1)")));
                }
                let only_none = a
                    .centrality
                    .as_ref()
                    .is_some_and(|c| c.iter().all(|s| s == "none"));
                if f > 0.0 && only_none {
                    return Err(CliError::usage(
                        "--isolate > 0 needs a --centrality other than none",
                    ));
                }
            }
            if a.threads == Some(0) {
                return Err(CliError::usage("--threads must be at least 1"));
            }
        }
        _ => {}
    }
    Ok(())
}

/// Parses and validates `argv` (program name first).
pub fn parse<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

fn push<T: ToString>(out: &mut Vec<String>, flag: &str, value: T) {
    out.push(flag.to_string());
    out.push(value.to_string());
}

fn push_opt<T: std::fmt::Display>(out: &mut Vec<String>, flag: &str, value: &Option<T>) {
    if let Some(v) = value {
        push(out, flag, v);
    }
}

fn push_list<T: std::fmt::Display>(out: &mut Vec<String>, flag: &str, value: &Option<Vec<T>>) {
    if let Some(v) = value {
        let joined: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        push(out, flag, joined.join(","));
    }
}

fn render_graph(out: &mut Vec<String>, g: &GraphArgs) {
    push_opt(
        out,
        "--input",
        &g.input.as_ref().map(|p| p.display().to_string()),
    );
    push(out, "--n", g.n);
    push(out, "--k", g.k);
    push(out, "--beta", g.beta);
    push(out, "--seed", g.seed);
    push(out, "--trial", g.trial);
}

fn path_str(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

/// The argument vector (program name first) that parses back to `cli`.
pub fn render(cli: &Cli) -> Vec<String> {
    let mut out = vec!["curveflat".to_string()];
    match &cli.command {
        Command::Generate(a) => {
            out.push("generate".into());
            render_graph(&mut out, &a.graph);
            push_opt(&mut out, "--out", &path_str(&a.out));
        }
        Command::Metrics(a) => {
            out.push("metrics".into());
            render_graph(&mut out, &a.graph);
            push(&mut out, "--reference", value_name(&a.reference));
            push(&mut out, "--reference-samples", a.reference_samples);
        }
        Command::Centrality(a) => {
            out.push("centrality".into());
            render_graph(&mut out, &a.graph);
            push(&mut out, "--measure", a.measure);
            push_opt(&mut out, "--top", &a.top);
            push(&mut out, "--damping", a.damping);
            push_opt(&mut out, "--katz-alpha", &a.katz_alpha);
        }
        Command::Spread(a) => {
            out.push("spread".into());
            render_graph(&mut out, &a.graph);
            push(&mut out, "--source", a.source);
            push(&mut out, "--isolate", a.isolate);
            push(&mut out, "--centrality", &a.centrality);
        }
        Command::Experiment(a) => {
            out.push("experiment".into());
            push_opt(&mut out, "--config", &path_str(&a.config));
            push_opt(&mut out, "--n", &a.n);
            push_opt(&mut out, "--k", &a.k);
            push_list(&mut out, "--beta", &a.beta);
            push_opt(&mut out, "--isolate", &a.isolate);
            push_list(&mut out, "--centrality", &a.centrality);
            push_opt(&mut out, "--trials", &a.trials);
            push_opt(&mut out, "--seed", &a.seed);
            push_opt(
                &mut out,
                "--reference",
                &a.reference.as_ref().map(value_name),
            );
            push_opt(&mut out, "--reference-samples", &a.reference_samples);
            push_opt(&mut out, "--fit", &a.fit.as_ref().map(value_name));
            push_opt(&mut out, "--damping", &a.damping);
            push_opt(&mut out, "--katz-alpha", &a.katz_alpha);
            push_opt(&mut out, "--out", &path_str(&a.out));
            push_opt(&mut out, "--json", &path_str(&a.json));
            push_opt(&mut out, "--plot", &path_str(&a.plot));
            push_opt(&mut out, "--threads", &a.threads);
        }
        Command::Plot(a) => {
            out.push("plot".into());
            push(&mut out, "--json", a.json.display());
            push(&mut out, "--out", a.out.display());
        }
    }
    for _ in 0..cli.verbose {
        out.push("--verbose".into());
    }
    if cli.quiet {
        out.push("--quiet".into());
    }
    out
}

fn load_graph(g: &GraphArgs) -> Result<Graph, CliError> {
    match &g.input {
        Some(path) => {
            let file = File::open(path).map_err(|e| io_error(path, e))?;
            Graph::read_edge_list(BufReader::new(file))
                .map_err(|e| CliError::from(e).with_context(&path.display().to_string()))
        }
        None => {
            let params = WsParams::new(g.n, g.k, g.beta)?;
            let seed = graph_seed(g.seed, g.beta, g.trial);
            Ok(watts_strogatz(&params, &mut rng_from_seed(seed))?)
        }
    }
}

impl CliError {
    fn with_context(mut self, context: &str) -> Self {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

/// Resolves the sweep configuration: defaults, then config file, then flags.
pub fn experiment_config(a: &ExperimentArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::default();
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        config = ExperimentConfig::from_toml_str(&text)
            .map_err(|e| CliError::from(e).with_context(&path.display().to_string()))?;
    }
    let patch = ConfigPatch {
        network: curveflat::experiment::NetworkPatch { n: a.n, k: a.k },
        sweep: curveflat::experiment::SweepPatch {
            betas: a.beta.clone(),
            measures: a.centrality.clone(),
            isolation: a.isolate,
            trials: a.trials,
            seed: a.seed,
        },
        analysis: curveflat::experiment::AnalysisPatch {
            reference: a.reference.as_ref().map(value_name),
            reference_samples: a.reference_samples,
            fit: a.fit.as_ref().map(value_name),
            damping: a.damping,
            katz_alpha: a.katz_alpha,
        },
    };
    config = patch.apply(config)?;
    // Empirical references always follow the resolved master seed.
    if let ReferenceMode::Empirical { seed, .. } = &mut config.reference_mode {
        *seed = mix(config.master_seed, u64::MAX);
    }
    if config.isolation_fraction > 0.0
        && config.measures.iter().all(|m| m.is_none())
        && !config.measures.is_empty()
    {
        return Err(CliError::usage(
            "isolation > 0 needs a centrality other than none",
        ));
    }
    config.validate()?;
    Ok(config)
}

fn write_histogram<W: Write>(out: &mut W, levels: &[u64], unreachable: u64) -> io::Result<()> {
    writeln!(out, "distance,count")?;
    for (i, c) in levels.iter().enumerate() {
        writeln!(out, "{},{c}", i + 1)?;
    }
    writeln!(out, "# unreachable {unreachable}")
}

struct Log {
    verbose: u8,
    quiet: bool,
}

impl Log {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet && self.verbose > 0 {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn stdout_error(e: io::Error) -> CliError {
    CliError {
        code: EXIT_IO,
        message: format!("stdout: {e}"),
    }
}

/// Executes a parsed invocation, writing results to `stdout`.
pub fn run<W: Write>(cli: &Cli, stdout: &mut W) -> Result<(), CliError> {
    validate(cli)?;
    let log = Log {
        verbose: cli.verbose,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Generate(a) => {
            let g = load_graph(&a.graph)?;
            match &a.out {
                Some(path) => {
                    let file = File::create(path).map_err(|e| io_error(path, e))?;
                    let mut w = BufWriter::new(file);
                    g.write_edge_list(&mut w)
                        .and_then(|_| w.flush())
                        .map_err(|e| io_error(path, e))?;
                    log.info(format!(
                        "wrote {} edges to {}",
                        g.edge_count(),
                        path.display()
                    ));
                }
                None => g.write_edge_list(&mut *stdout).map_err(stdout_error)?,
            }
        }
        Command::Metrics(a) => {
            let g = load_graph(&a.graph)?;
            let mode = match a.reference {
                ReferenceArg::Analytic => ReferenceMode::Analytic,
                ReferenceArg::Empirical => ReferenceMode::Empirical {
                    samples: a.reference_samples,
                    seed: mix(a.graph.seed, u64::MAX),
                },
            };
            let refs = reference_values(g.node_count(), a.graph.k, mode)?;
            let m = structural_metrics(&g, &refs);
            let sw = m.small_worldness;
            let rows = [
                ("nodes", Some(g.node_count() as f64)),
                ("edges", Some(g.edge_count() as f64)),
                ("C", Some(m.clustering)),
                ("L", m.path_length.mean),
                (
                    "disconnected_frac",
                    Some(m.path_length.disconnected_fraction()),
                ),
                ("S1", sw.s1),
                ("S2", sw.s2),
                ("S3", sw.s3),
                ("C_rand", Some(refs.c_rand)),
                ("L_rand", Some(refs.l_rand)),
                ("C_latt", Some(refs.c_latt)),
                ("L_latt", Some(refs.l_latt)),
            ];
            for (name, v) in rows {
                writeln!(stdout, "{name},{}", format_sig(v)).map_err(stdout_error)?;
            }
        }
        Command::Centrality(a) => {
            let g = load_graph(&a.graph)?;
            let params = CentralityParams {
                damping: a.damping,
                katz_alpha: a.katz_alpha,
                ..CentralityParams::default()
            };
            let scores = centrality::compute(&g, a.measure, &params)?;
            writeln!(stdout, "node,{}", a.measure).map_err(stdout_error)?;
            for (u, s) in scores.scores.iter().enumerate() {
                writeln!(stdout, "{u},{}", format_sig(Some(*s))).map_err(stdout_error)?;
            }
            if let Some(top) = a.top {
                let ranking = centrality::rank_top_fraction(&scores.scores, top)?;
                let ids: Vec<String> = ranking.selected.iter().map(|u| u.to_string()).collect();
                writeln!(stdout, "# selected {}", ids.join(" ")).map_err(stdout_error)?;
            }
        }
        Command::Spread(a) => {
            let g = load_graph(&a.graph)?;
            g.check_node(a.source)?;
            let measure = parse_strategy(&a.centrality)?;
            let selected = match measure {
                Some(m) if a.isolate > 0.0 => {
                    let scores = centrality::compute(&g, m, &CentralityParams::default())?;
                    centrality::rank_top_fraction(&scores.scores, a.isolate)?.selected
                }
                _ => Vec::new(),
            };
            if selected.contains(&a.source) {
                return Err(CliError::usage(format!(
                    "--source {} is isolated",
                    a.source
                )));
            }
            let remaining = isolate(&g, &selected)?;
            let local = remaining.old_to_new[a.source].expect("source survives");
            let levels = spread_from(&remaining.graph, local)?;
            let h = DistanceHistogram::from_levels(levels, remaining.graph.node_count());
            if !selected.is_empty() {
                let ids: Vec<String> = selected.iter().map(|u| u.to_string()).collect();
                writeln!(stdout, "# isolated {}", ids.join(" ")).map_err(stdout_error)?;
            }
            write_histogram(stdout, &h.counts, h.unreachable_total).map_err(stdout_error)?;
            if let Ok((d, c)) = epidemic::peak(&h) {
                log.info(format!("peak {c} at distance {d}"));
            }
        }
        Command::Experiment(a) => {
            let config = experiment_config(a)?;
            let pool = a.threads.map_or("default".to_string(), |t| t.to_string());
            log.info(format!(
                "running {} cells x {} trials, threads: {pool}",
                config.betas.len() * config.measures.len(),
                config.trials
            ));
            let result = match a.threads {
                Some(t) => run_experiment_with_threads(&config, t)?,
                None => run_experiment(&config)?,
            };
            for cell in &result.cells {
                log.info(format!(
                    "beta {} {}: peak {} at {}, b {:.4} ({:.2?})",
                    cell.beta,
                    strategy_name(cell.measure),
                    cell.peak_count,
                    cell.peak_distance,
                    cell.gamma.scale,
                    cell.wall_time.0
                ));
            }
            let report = Report::from_result(&result)?;
            let mut wrote_any = false;
            if let Some(p) = &a.out {
                emit_csv(&report, p)?;
                wrote_any = true;
            }
            if let Some(p) = &a.json {
                emit_json(&report, p)?;
                wrote_any = true;
            }
            if let Some(dir) = &a.plot {
                if !report.cells.is_empty() {
                    plot::emit_plots(&report, dir)?;
                }
                wrote_any = true;
            }
            if !wrote_any {
                report.write_csv(&mut *stdout)?;
            }
        }
        Command::Plot(a) => {
            let report = read_json_file(&a.json)?;
            let written = plot::emit_plots(&report, &a.out)?;
            for p in written {
                log.info(format!("wrote {}", p.display()));
            }
        }
    }
    Ok(())
}

/// Parses `argv`, runs it, and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
