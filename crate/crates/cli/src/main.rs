//! `diskfn`: command-line front end for the disk function-theory toolkit.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 on
//! input or configuration errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or invalid input.
    Input(String),
    /// A computation or check failed.
    Verify(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<diskfn::Error> for CliError {
    fn from(e: diskfn::Error) -> Self {
        use diskfn::Error::*;
        match e {
            OutsideDisk { .. }
            | Degenerate(_)
            | Domain(_)
            | Cardinality { .. }
            | IllConditionedBoundary { .. }
            | Hypothesis(_) => CliError::Input(e.to_string()),
            _ => CliError::Verify(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "diskfn",
    version,
    about = "Blaschke products, Cauchy transforms, zero matching and certified paths on the unit disk"
)]
struct Cli {
    /// Boundary grid size (power of two, at least 256).
    #[arg(long, global = true, default_value_t = 4096)]
    grid: usize,
    /// Override a tolerance, e.g. `--tol identity=1e-9` (repeatable).
    #[arg(long, global = true)]
    tol: Vec<String>,
    /// Seed for random instances and Monte Carlo walks.
    #[arg(long, global = true, default_value_t = diskfn::fixtures::FIXTURE_SEED)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Slack constant for box Carleson norm bounds.
    #[arg(long, global = true, default_value_t = 8.0)]
    slack: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Boundary trace of a Blaschke product.
    Eval {
        #[arg(long)]
        zeros: PathBuf,
    },
    /// Pseudohyperbolic and hyperbolic distances between point pairs.
    Geom {
        /// JSON `{"pairs":[{"z":{"re","im"},"w":{"re","im"}}]}`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Box Carleson norm of μ_b, interpolation constant, separation split and α_b.
    Carleson {
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long, default_value_t = 20)]
        depth: u32,
        #[arg(long, default_value_t = 1.0)]
        separation: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Cauchy transform of the matched segments, argument identity and outer correction.
    Cauchy {
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long)]
        zeros_star: PathBuf,
    },
    /// Bottleneck pairing of two zero lists.
    Match {
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long)]
        zeros_star: PathBuf,
        #[arg(long, default_value_t = 10)]
        bins: usize,
    },
    /// Build and certify a polygonal path from b to b* g.
    Path {
        #[arg(long, required_unless_present = "fixture")]
        zeros: Option<PathBuf>,
        #[arg(long, required_unless_present = "fixture")]
        zeros_star: Option<PathBuf>,
        /// Use a shipped pair instead of input files (`adversarial`).
        #[arg(long, conflicts_with_all = ["zeros", "zeros_star"])]
        fixture: Option<String>,
        /// Fixed step size; refined automatically when absent.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = diskfn::acceptance::CERTIFY_ETA)]
        eta: f64,
        #[arg(long, default_value_t = diskfn::acceptance::CERTIFY_SAMPLES)]
        samples: usize,
    },
    /// Level sets, harmonic measures, contour logarithm and arc inequality.
    Contour {
        /// Shipped fixture: `disk`, `disk-walks` or `level-set`.
        #[arg(long, conflicts_with_all = ["zeros", "zeros_b"])]
        fixture: Option<String>,
        /// Zeros of u; the curves are the level set |u| = delta.
        #[arg(long, required_unless_present = "fixture")]
        zeros: Option<PathBuf>,
        /// Zeros of b (same count per curve as u).
        #[arg(long, required_unless_present = "fixture")]
        zeros_b: Option<PathBuf>,
        #[arg(long, default_value_t = 0.15)]
        delta: f64,
        #[arg(long, default_value_t = 257)]
        resolution: usize,
        /// Calibration point `re,im`, outside every curve.
        #[arg(long, default_value = "0,0.9")]
        reference: String,
        #[arg(long, default_value_t = diskfn::contour::DEFAULT_WALKS)]
        walks: usize,
        #[arg(long, default_value_t = diskfn::fixtures::FIXTURE_MOMENTS)]
        moments: usize,
    },
    /// Write shipped fixtures as JSON zero lists.
    Fixtures {
        /// `singular-shift`, `geometric`, `adversarial` or `all`.
        #[arg(default_value = "all")]
        name: String,
        #[arg(long, default_value_t = 50)]
        k: i64,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// Run the full acceptance suite.
    Acceptance {
        #[arg(long, default_value_t = diskfn::contour::DEFAULT_WALKS)]
        walks: usize,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::new(cli.grid, &cli.tol, cli.slack, cli.seed, cli.out)?;
    commands::dispatch(&cli.command, &cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let msg = match &e {
                CliError::Input(m) => format!("input error: {m}"),
                CliError::Verify(m) => format!("verification failed: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(e.code())
        }
    }
}
