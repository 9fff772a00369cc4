//! `bmst` command-line driver.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use bmst::checks::{Corruption, LemmaId};
use bmst::geometry::MetricKind;
use bmst::io::Format;
use bmst::mst::Solver;
use bmst::beta::SeriesForm;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<bmst::Error> for Failure {
    fn from(e: bmst::Error) -> Self {
        Failure::internal(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::internal(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "bmst", version, about = "Random bipartite Euclidean minimum spanning trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a uniform two-colored instance.
    Gen(GenFlags),
    /// Solve the bipartite MST of a sampled or given instance.
    Solve(SolveFlags),
    /// Run the structural checks on an MST, optionally corrupted first.
    Verify(VerifyFlags),
    /// Estimate the limit constant from the series expansion.
    BetaSeries(BetaSeriesFlags),
    /// Estimate the limit constant from extrapolated torus costs.
    BetaDirect(BetaDirectFlags),
    /// Maximum degree against ln n.
    ScanDegree(ScanFlags),
    /// Normalized cost on the cube and the torus.
    ScanScaling(ScanFlags),
    /// Relative spread of the normalized cost.
    ScanConcentration(ScanFlags),
    /// Hausdorff and nearest-neighbor distances at the natural rate.
    ScanRates(ScanFlags),
    /// Mean MST cost of K_n with uniform weights.
    CalibrateFrieze(FriezeFlags),
    /// Occupancy tails against the Chernoff bound.
    TailCheck(TailFlags),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonFlags {
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (1 runs serially).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Table format: csv or json.
    #[arg(long)]
    pub format: Option<Format>,
    /// JSON file with defaults for any option.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InstanceFlags {
    /// Total number of points.
    #[arg(long)]
    pub n: Option<usize>,
    /// Red fraction.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// cube or torus.
    #[arg(long)]
    pub metric: Option<MetricKind>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub instance: InstanceFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveFlags {
    /// Instance CSV; metric and seed come from its `.meta.json` sidecar.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub instance: InstanceFlags,
    /// Cost exponent.
    #[arg(long)]
    pub p: Option<f64>,
    /// brute or grid_boruvka.
    #[arg(long)]
    pub solver: Option<Solver>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyFlags {
    /// Instance CSV; metric and seed come from its `.meta.json` sidecar.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub instance: InstanceFlags,
    /// Cost exponent.
    #[arg(long)]
    pub p: Option<f64>,
    /// Also run the Hilbert chain and bounded-difference checks where they apply.
    #[arg(long)]
    pub all: bool,
    /// Keep only these checks (repeatable or comma separated).
    #[arg(long, value_delimiter = ',')]
    pub check: Option<Vec<LemmaId>>,
    /// Replace the MST by a corrupted tree: long_edge_swap, drop_nearest or star.
    #[arg(long)]
    pub corrupt: Option<Corruption>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaSeriesFlags {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Largest k_R + k_B summed.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Monte Carlo samples per term.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Samples per union-volume estimate.
    #[arg(long)]
    pub inner_samples: Option<usize>,
    /// rederived or printed.
    #[arg(long)]
    pub form: Option<SeriesForm>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaDirectFlags {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated increasing n values.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<usize>>,
    /// Trials per n.
    #[arg(long)]
    pub trials: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanFlags {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// cube or torus.
    #[arg(long)]
    pub metric: Option<MetricKind>,
    /// Comma-separated increasing n values.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<usize>>,
    /// Trials per n.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Record wall-clock solve times (outputs then differ between runs).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FriezeFlags {
    /// Vertices of the complete graph.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TailFlags {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Dyadic level of the cell.
    #[arg(long)]
    pub level: Option<u32>,
    /// Comma-separated t values (none equal to 1).
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
