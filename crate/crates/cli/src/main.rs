//! Command-line front end: physicality / separability / P-representability
//! analysis of two-mode Gaussian covariance matrices.

mod commands;
mod input;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CmdError, StateKind};
use input::Convention;

#[derive(Parser)]
#[command(
    name = "gausep",
    version,
    about = "Separability and P-representation analysis for two-mode Gaussian states",
    after_help = "Exit codes: 0 success, 2 parse/validation failure, \
                  3 domain failure (not a state, unphysical, no certificate), \
                  4 internal cross-check inconsistency."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one covariance matrix: standard form, margins,
    /// certificate, witness, and both cross-check constructions.
    Analyze {
        /// Input state file (JSON).
        input: PathBuf,
        /// Normalization of the input matrix.
        #[arg(long, value_enum, default_value = "half")]
        convention: Convention,
        /// Margin tolerance; overrides the input file's "tol".
        #[arg(long)]
        tol: Option<f64>,
        /// Seed for the witness search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CSV scan over t of the closed-form bound on c1² against the
    /// grid-maximized positivity bound, with the extremal (r1, r2).
    RegionScan {
        /// Mode variance a (>= 1/2).
        a: f64,
        /// Mode variance b (>= 1/2).
        b: f64,
        /// Number of t intervals between 0 and 1.
        #[arg(long, default_value_t = 20)]
        t_steps: usize,
        /// Coarse grid resolution per squeezing axis.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Writes random covariance matrices of the requested class,
    /// conjugated by random local symplectic transformations.
    RandomState {
        /// Class of states to produce.
        #[arg(value_enum)]
        kind: StateKind,
        /// Number of files to write.
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// RNG seed; identical seeds give identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Margin tolerance used during rejection sampling.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        output: PathBuf,
    },
    /// Samples the certificate P-function and reconstructs the
    /// squeezed-frame second moments with per-entry z-scores.
    SampleP {
        /// Input state file (JSON).
        input: PathBuf,
        /// Normalization of the input matrix.
        #[arg(long, value_enum, default_value = "half")]
        convention: Convention,
        /// Margin tolerance; overrides the input file's "tol".
        #[arg(long)]
        tol: Option<f64>,
        /// Number of samples.
        #[arg(long, default_value_t = 200_000)]
        n: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report destination (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze {
            input,
            convention,
            tol,
            seed,
            output,
        } => commands::analyze(input, *convention, *tol, *seed, output),
        Command::RegionScan {
            a,
            b,
            t_steps,
            grid,
            output,
        } => commands::region_scan(*a, *b, *t_steps, *grid, output),
        Command::RandomState {
            kind,
            count,
            seed,
            tol,
            output,
        } => commands::random_state(*kind, *count, *seed, *tol, output),
        Command::SampleP {
            input,
            convention,
            tol,
            n,
            seed,
            output,
        } => commands::sample_p(input, *convention, *tol, *n, *seed, output),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(e @ CmdError::Parse(_)) | Err(e @ CmdError::Domain(_)) | Err(e @ CmdError::Inconsistent(_)) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
