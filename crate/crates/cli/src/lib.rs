//! Command-line front end for `tfim-quench`.
//!
//! Every subcommand produces a [`Report`] which is rendered as CSV or JSON.
//! Inputs are validated before any evaluation starts; usage problems exit
//! with code 2 and numerical failures with code 1.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use tfim_quench::QuadratureConfig;

pub use format::{fmt_g, Cell, Report, CSV_HEADER};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] tfim_quench::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

pub(crate) fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "tfim-quench", version, about = "Entanglement dynamics of the quenched transverse Ising chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    #[serde(skip)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    /// Worker threads for grid evaluations (0 picks the number of cores).
    #[arg(long, global = true, env = "QC_WORKERS")]
    #[serde(skip)]
    pub workers: Option<usize>,

    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadratureArgs {
    /// Minimum number of Gauss-Legendre panels on [0, pi].
    #[arg(long, global = true, default_value_t = 32)]
    pub base_panels: usize,
    /// Nodes per panel.
    #[arg(long, global = true, default_value_t = 10)]
    pub points_per_panel: usize,
    /// Convergence tolerance between successive panel doublings.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub quad_tolerance: f64,
    /// Maximum number of panel doublings.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_refinements: usize,
}

impl QuadratureArgs {
    pub fn config(&self) -> Result<QuadratureConfig, CliError> {
        let cfg = QuadratureConfig {
            base_panels: self.base_panels,
            points_per_panel: self.points_per_panel,
            tolerance: self.quad_tolerance,
            max_refinements: self.max_refinements,
            ..QuadratureConfig::default()
        };
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Time series of the correlators g11, g12 and f12.
    Correlators(SeriesArgs),
    /// Time series of the two-site density matrix and its concurrence.
    Rho(SeriesArgs),
    /// Concurrence over a (lambda, t) grid.
    Surface(SurfaceArgs),
    /// Concurrence against lambda at fixed times.
    Slices(SlicesArgs),
    /// Concurrence against t at fixed lambda.
    Traces(TracesArgs),
    /// Time of the first concurrence maximum and its lambda derivative.
    Tm(TmArgs),
    /// Largest concurrence inside a time band.
    Deadband(DeadbandArgs),
    /// Qualitative shape of C(t) per lambda.
    Regime(RegimeArgs),
    /// Analytic result against exact diagonalization of a finite chain.
    Oracle(OracleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Correlators(_) => "correlators",
            Command::Rho(_) => "rho",
            Command::Surface(_) => "surface",
            Command::Slices(_) => "slices",
            Command::Traces(_) => "traces",
            Command::Tm(_) => "tm",
            Command::Deadband(_) => "deadband",
            Command::Regime(_) => "regime",
            Command::Oracle(_) => "oracle",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeriesArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 0.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub lambda_step: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Panel {
    A,
    B,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SlicesArgs {
    /// Default time set: a = {0.5, 1, 1.5, 2}, b = {4, 5, 6, 7}.
    #[arg(long, value_enum, default_value_t = Panel::A)]
    pub panel: Panel,
    /// Explicit times, overriding the panel defaults.
    #[arg(long = "t", value_delimiter = ',')]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub lambda_step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TracesArgs {
    /// Default lambda set: a = {0.2, 0.4, 0.6, 0.8}, b = {1.5, 3.0}.
    #[arg(long, value_enum, default_value_t = Panel::A)]
    pub panel: Panel,
    /// Explicit lambda values, overriding the panel defaults.
    #[arg(long = "lambda", value_delimiter = ',')]
    pub lambdas: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    /// End of the time window searched for maxima.
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub coarse_dt: f64,
    /// Concurrence at or below this counts as zero.
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub t_tolerance: f64,
}

impl SearchArgs {
    pub fn config(&self) -> Result<tfim_quench::analysis::SearchConfig, CliError> {
        let cfg = tfim_quench::analysis::SearchConfig {
            t_max: self.t_max,
            coarse_dt: self.coarse_dt,
            epsilon: self.epsilon,
            t_tolerance: self.t_tolerance,
        };
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TmArgs {
    #[arg(long, default_value_t = 0.2)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0.02)]
    pub lambda_step: f64,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DeadbandArgs {
    #[arg(long, default_value_t = 0.1)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub lambda_step: f64,
    #[arg(long, default_value_t = 2.47)]
    pub band_lo: f64,
    #[arg(long, default_value_t = 2.69)]
    pub band_hi: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Concurrence bound the band is checked against.
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RegimeArgs {
    #[arg(long = "lambda", value_delimiter = ',', default_values_t = [0.2, 0.4, 0.6, 0.9, 1.0, 1.5, 3.0])]
    pub lambdas: Vec<f64>,
    /// Time window inspected.
    #[arg(long, default_value_t = 10.0)]
    pub window: f64,
    #[arg(long, default_value_t = 0.01)]
    pub coarse_dt: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    /// Chain length (even, 4 to 12).
    #[arg(long, default_value_t = 10)]
    pub oracle_n: usize,
    #[arg(long = "lambda", value_delimiter = ',', default_values_t = [0.5, 1.0, 1.5])]
    pub lambdas: Vec<f64>,
    #[arg(long = "t", value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 2.0])]
    pub times: Vec<f64>,
}

fn meta(cli: &Cli, report: &Report) -> serde_json::Value {
    json!({
        "schema": CSV_HEADER.trim_start_matches("# "),
        "command": cli.command.name(),
        "config": cli,
        "resolved": report.resolved,
    })
}

/// Runs the subcommand on a pool of `cli.workers` threads and renders it.
pub fn render(cli: &Cli) -> Result<String, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.workers.unwrap_or(0)).build().map_err(usage)?;
    let report = pool.install(|| commands::run(cli))?;
    Ok(match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(meta(cli, &report)),
    })
}

/// Renders and writes to `cli.output` or standard output.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let text = render(cli)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
