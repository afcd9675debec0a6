//! Command-line front end: argument definitions, command dispatch and
//! CSV/JSON/Markdown rendering of result tables.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::estimators::{self, TmShape};
use crate::montecarlo::{self, Execution, SimulationConfig, SimulationReport, SyntheticSpec, WeightPolicy};
use crate::mse::{self, DominanceCheck, Verdict};
use crate::population::{self, DensityMethod, MedianParams, PopulationFrame};

/// Exit code for data or computation errors.
pub const EXIT_DATA: u8 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Data(Error::UnknownEstimator { .. }) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "auxmedian", version, about = "Median estimators with an auxiliary variable")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the full parameter vector, including derived fields.
    Params(ParamsArgs),
    /// Analytic (minimum) MSE table for a set of estimators.
    Table(TableArgs),
    /// Monte Carlo SRSWOR simulation, empirical vs analytic MSE.
    Simulate(SimulateArgs),
    /// Evaluate the pairwise dominance checks.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityArg {
    Kernel,
    Known,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    TrueParams,
    PlugIn,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, env = "AUXMEDIAN_FORMAT", default_value = "md")]
    pub format: Format,
    /// Decimal places for CSV/Markdown cells.
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// How densities at the medians are obtained when reading raw data.
    #[arg(long, value_enum, default_value = "kernel")]
    pub density: DensityArg,
    /// Known density of y at its median (with `--density known`).
    #[arg(long)]
    pub fy: Option<f64>,
    /// Known density of x at its median (with `--density known`).
    #[arg(long)]
    pub fx: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Population CSV with an `x,y` header.
    #[arg(long, conflicts_with = "params", required_unless_present = "params")]
    pub input: Option<PathBuf>,
    /// Params JSON file.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Sample size (required with `--input`).
    #[arg(long)]
    pub n: Option<u64>,
    #[command(flatten)]
    pub density: DensityArgs,
    /// Warn about unknown params keys instead of rejecting them.
    #[arg(long)]
    pub lenient: bool,
    /// Output format; plain `key = value` lines when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Decimal places for the plain rendering.
    #[arg(long, default_value_t = 5)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// Comma-separated preset names, or `all` for the reference row set.
    #[arg(long, default_value = "all")]
    pub estimators: String,
    /// Effective exponent parameter of the M_d4 minimum MSE.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long)]
    pub lenient: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Population CSV with an `x,y` header.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    pub input: Option<PathBuf>,
    /// JSON file describing a correlated lognormal population.
    #[arg(long)]
    pub synthetic: Option<PathBuf>,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample size used for the analytic design factor; defaults to `--n`
    /// (or `N − 1` for a census run).
    #[arg(long)]
    pub design_n: Option<u64>,
    #[arg(long, default_value = "M_y,M_r,M_d,t_m")]
    pub estimators: String,
    #[arg(long, value_enum, default_value = "true-params")]
    pub weights: WeightsArg,
    #[command(flatten)]
    pub density: DensityArgs,
    /// Worker threads (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Run replicates on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
    /// Also write the full simulation report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// `t_mq` member used for the t_mq comparison.
    #[arg(long, default_value = "t_mq7")]
    pub tmq_preset: String,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long)]
    pub lenient: bool,
    /// `json` for machine-readable output; plain text otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// One table row; JSON field names are part of the output contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub estimator: String,
    pub analytic_mse: Option<f64>,
    pub analytic_bias: Option<f64>,
    pub empirical_mse: Option<f64>,
    /// `null` means infinite efficiency (zero MSE).
    pub pre: Option<f64>,
}

pub const COLUMNS: [&str; 5] = ["estimator", "analytic_mse", "analytic_bias", "empirical_mse", "pre"];

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedTable {
    pub rows: Vec<TableRow>,
    pub format: Format,
    pub precision: usize,
}

impl RenderedTable {
    pub fn render(&self) -> String {
        match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.rows).expect("rows serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = COLUMNS.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&self.cells(row).join(","));
                    s.push('\n');
                }
                s
            }
            Format::Md => {
                let mut s = format!("| {} |\n", COLUMNS.join(" | "));
                s.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
                for row in &self.rows {
                    s.push_str(&format!("| {} |\n", self.cells(row).join(" | ")));
                }
                s
            }
        }
    }

    fn cells(&self, row: &TableRow) -> Vec<String> {
        let p = self.precision;
        let num = |v: Option<f64>| v.map_or_else(String::new, |v| format!("{v:.p$}"));
        let pre = match (row.pre, row.analytic_mse.or(row.empirical_mse)) {
            (Some(v), _) => format!("{v:.p$}"),
            (None, Some(_)) => "inf".to_string(),
            (None, None) => String::new(),
        };
        vec![
            row.estimator.clone(),
            num(row.analytic_mse),
            num(row.analytic_bias),
            num(row.empirical_mse),
            pre,
        ]
    }
}

/// Parses rows back from `--format json` output.
pub fn parse_json_rows(text: &str) -> Result<Vec<TableRow>, serde_json::Error> {
    serde_json::from_str(text)
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(Error::Io(format!("{}: {e}", path.display()))))
}

fn read_params(path: &Path, lenient: bool) -> CliResult<MedianParams> {
    Ok(population::load_params(open(path)?, !lenient)?)
}

fn density_methods(args: &DensityArgs) -> CliResult<(DensityMethod, DensityMethod)> {
    match args.density {
        DensityArg::Kernel => Ok((DensityMethod::Kernel, DensityMethod::Kernel)),
        DensityArg::Known => match (args.fy, args.fx) {
            (Some(fy), Some(fx)) => Ok((DensityMethod::Known(fy), DensityMethod::Known(fx))),
            _ => Err(CliError::Usage("--density known needs both --fy and --fx".into())),
        },
    }
}

fn estimator_list(spec: &str, default_all: &[&'static str]) -> CliResult<Vec<&'static str>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(default_all.to_vec());
    }
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| estimators::canonical_name(s).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

/// Runs one command and returns its standard output.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Params(args) => cmd_params(&args),
        Command::Table(args) => cmd_table(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Compare(args) => cmd_compare(&args),
    }
}

fn trim_number(v: f64, precision: usize) -> String {
    let s = format!("{v:.precision$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn cmd_params(args: &ParamsArgs) -> CliResult<String> {
    let params = match (&args.input, &args.params) {
        (Some(_), Some(_)) => return Err(CliError::Usage("--input and --params are exclusive".into())),
        (None, Some(path)) => read_params(path, args.lenient)?,
        (Some(path), None) => {
            let n = args.n.ok_or_else(|| CliError::Usage("--input needs --n".into()))?;
            let frame = population::load_population(open(path)?)?;
            let (fy, fx) = density_methods(&args.density)?;
            population::compute_params(&frame, n, fy, fx)?
        }
        (None, None) => return Err(CliError::Usage("one of --input or --params is required".into())),
    };

    let p = args.precision;
    let fields: [(&str, f64); 15] = [
        ("N", params.population_size as f64),
        ("n", params.sample_size as f64),
        ("f", params.sampling_fraction),
        ("gamma", params.gamma),
        ("M_y", params.median_y),
        ("M_x", params.median_x),
        ("fy_at_median", params.density_y),
        ("fx_at_median", params.density_x),
        ("C_y", params.cv_y),
        ("C_x", params.cv_x),
        ("p11", params.p11),
        ("rho_c", params.rho_c),
        ("R", params.ratio),
        ("b", params.gap),
        ("k_c", params.optimal_exponent),
    ];
    Ok(match args.format {
        Some(Format::Json) => serde_json::to_string_pretty(&params).expect("params serialize") + "\n",
        Some(Format::Csv) => {
            let mut s = String::from("key,value\n");
            for (k, v) in fields {
                let _ = writeln!(s, "{k},{}", trim_number(v, p));
            }
            s
        }
        Some(Format::Md) => {
            let mut s = String::from("| key | value |\n|---|---|\n");
            for (k, v) in fields {
                let _ = writeln!(s, "| {k} | {} |", trim_number(v, p));
            }
            s
        }
        None => {
            let mut s = String::new();
            for (k, v) in fields {
                let _ = writeln!(s, "{k} = {}", trim_number(v, p));
            }
            s
        }
    })
}

pub fn cmd_table(args: &TableArgs) -> CliResult<String> {
    let params = read_params(&args.params, args.lenient)?;
    let names = estimator_list(&args.estimators, mse::TABLE_ROWS)?;
    let rows = mse::report_rows(&names, &params, args.delta)?
        .into_iter()
        .map(|r| TableRow {
            estimator: r.estimator,
            analytic_mse: Some(r.analytic_mse),
            analytic_bias: r.analytic_bias,
            empirical_mse: None,
            pre: r.pre_vs_sample_median,
        })
        .collect();
    if params.degenerate_pivot() {
        log::warn!("R = 1: t_m and M_d3 minima are degenerate (0)");
    }
    Ok(RenderedTable {
        rows,
        format: args.output.format,
        precision: args.output.precision,
    }
    .render())
}

/// Population frame and parameter vector for a simulation run.
pub fn simulation_inputs(args: &SimulateArgs) -> CliResult<(PopulationFrame, MedianParams)> {
    let design_n = |big_n: usize| args.design_n.unwrap_or(args.n.min(big_n as u64 - 1));
    match (&args.input, &args.synthetic) {
        (Some(_), Some(_)) => Err(CliError::Usage("--input and --synthetic are exclusive".into())),
        (Some(path), None) => {
            let frame = population::load_population(open(path)?)?;
            let (fy, fx) = density_methods(&args.density)?;
            let params = population::compute_params(&frame, design_n(frame.len()), fy, fx)?;
            Ok((frame, params))
        }
        (None, Some(path)) => {
            let spec: SyntheticSpec = serde_json::from_reader(open(path)?)
                .map_err(|e| CliError::Data(Error::Schema(format!("synthetic spec: {e}"))))?;
            let frame = montecarlo::make_synthetic(&spec)?;
            let my = population::finite_median(frame.y())?;
            let mx = population::finite_median(frame.x())?;
            let params = population::compute_params(
                &frame,
                design_n(frame.len()),
                DensityMethod::Known(spec.density_y(my)),
                DensityMethod::Known(spec.density_x(mx)),
            )?;
            Ok((frame, params))
        }
        (None, None) => Err(CliError::Usage("one of --input or --synthetic is required".into())),
    }
}

pub fn simulation_rows(report: &SimulationReport) -> Vec<TableRow> {
    report
        .estimators
        .iter()
        .map(|s| {
            let empirical = s.empirical_mse.is_finite().then_some(s.empirical_mse);
            TableRow {
                estimator: s.id.clone(),
                analytic_mse: Some(s.analytic_mse),
                analytic_bias: s.analytic_bias,
                empirical_mse: empirical,
                pre: empirical.and_then(|m| mse::pre(m, report.baseline_empirical_mse)),
            }
        })
        .collect()
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<String> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let names = estimator_list(&args.estimators, estimators::PRESET_NAMES)?;
    let (frame, params) = simulation_inputs(args)?;
    let config = SimulationConfig {
        n: args.n,
        reps: args.reps,
        seed: args.seed,
        estimators: names.iter().map(|s| s.to_string()).collect(),
        weights: match args.weights {
            WeightsArg::TrueParams => WeightPolicy::TrueParams,
            WeightsArg::PlugIn => WeightPolicy::PlugIn,
        },
    };
    let report = execute(&frame, &config, &params, args)?;
    for s in report.estimators.iter().filter(|s| s.failures > 0) {
        log::warn!("{}: {} of {} replicates failed", s.id, s.failures, config.reps);
    }
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(path, json + "\n").map_err(|e| CliError::Data(e.into()))?;
    }
    Ok(RenderedTable {
        rows: simulation_rows(&report),
        format: args.output.format,
        precision: args.output.precision,
    }
    .render())
}

#[cfg(feature = "parallel")]
fn execute(
    frame: &PopulationFrame,
    config: &SimulationConfig,
    params: &MedianParams,
    args: &SimulateArgs,
) -> CliResult<SimulationReport> {
    if args.sequential {
        return Ok(montecarlo::run_simulation_with(frame, config, params, Execution::Sequential)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    Ok(pool.install(|| montecarlo::run_simulation_with(frame, config, params, Execution::Parallel))?)
}

#[cfg(not(feature = "parallel"))]
fn execute(
    frame: &PopulationFrame,
    config: &SimulationConfig,
    params: &MedianParams,
    _args: &SimulateArgs,
) -> CliResult<SimulationReport> {
    Ok(montecarlo::run_simulation_with(frame, config, params, Execution::Sequential)?)
}

fn tmq_shape_for(name: &str, params: &MedianParams) -> CliResult<TmShape> {
    let canonical = estimators::canonical_name(name).map_err(|e| CliError::Usage(e.to_string()))?;
    canonical
        .strip_prefix("t_mq")
        .and_then(|i| i.parse().ok())
        .and_then(|i| estimators::tmq_shape(i, params))
        .ok_or_else(|| CliError::Usage(format!("`{name}` is not a t_mq preset (t_mq1..t_mq9)")))
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<String> {
    let params = read_params(&args.params, args.lenient)?;
    let shape = tmq_shape_for(&args.tmq_preset, &params)?;
    let checks = mse::dominance_checks(&params, &shape, args.delta)?;
    if args.format == Some(Format::Json) {
        return Ok(serde_json::to_string_pretty(&checks).expect("checks serialize") + "\n");
    }
    Ok(render_checks(&checks))
}

pub fn render_checks(checks: &[DominanceCheck]) -> String {
    let mut s = String::new();
    for c in checks {
        let verdict = match c.verdict {
            Verdict::Holds => "pass",
            Verdict::Fails => "FAIL",
            Verdict::Indeterminate => "indeterminate",
            Verdict::NotApplicable => "n/a",
        };
        let _ = write!(
            s,
            "({}) {}: {verdict} [lhs {:.2}, rhs {:.2}, margin {:.2}]",
            c.id, c.claim, c.lhs, c.rhs, c.margin
        );
        if c.degenerate_pivot {
            s.push_str(" (degenerate: R = 1)");
        }
        s.push('\n');
    }
    let held = checks.iter().filter(|c| c.verdict == Verdict::Holds).count();
    let _ = writeln!(s, "{held}/{} checks pass", checks.len());
    s
}
