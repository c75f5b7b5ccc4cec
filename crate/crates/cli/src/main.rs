//! `kdvscatter`: direct and inverse scattering for the line Schrödinger
//! operator, KdV evolution by rotation of the scattering data, and
//! verification reports.
//!
//! Exit codes: 0 success, 2 input error, 3 input outside the admissible
//! class, 4 numerical invariant beyond its gate.

// `!(x <= tol)` guards also fail on NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod schema;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Method;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "kdvscatter", version, about = "Scattering transforms and KdV flows on the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scattering data S, W, r±, t, A and I of a potential file.
    Scatter {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Proceed (and record the failed certificate) for non-generic input.
        #[arg(long)]
        allow_nongeneric: bool,
    },
    /// Potential on the configured grid from the S column of a scattering file.
    Invert {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evolve a potential file to time t.
    Evolve {
        input: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Method::Scattering)]
        method: Method,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite over a corpus and print a report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Directory of potential files; the built-in corpus without one.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Evolution time of the flow suite.
        #[arg(long, default_value_t = 0.1)]
        t: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the identities stored in a scattering or potential file.
    Validate {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a built-in profile (e.g. gaussian, sech2-barrier) on the configured grid.
    Sample {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Sizes the global pool from `KDVSCATTER_THREADS` (unset or 0: one worker per core).
fn init_threads() -> Result<(), CliError> {
    let threads = match std::env::var("KDVSCATTER_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::input(format!("KDVSCATTER_THREADS must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let config = &cli.config;
    config.validate()?;
    match cli.command {
        Command::Scatter {
            input,
            output,
            allow_nongeneric,
        } => commands::scatter(&input, output.as_deref(), allow_nongeneric, config),
        Command::Invert { input, output } => commands::invert(&input, output.as_deref(), config),
        Command::Evolve {
            input,
            t,
            method,
            output,
        } => commands::evolve(&input, t, method, output.as_deref(), config),
        Command::Verify {
            suite,
            corpus,
            t,
            output,
        } => verify::verify(suite, corpus.as_deref(), t, output.as_deref(), config),
        Command::Validate { input, output } => commands::validate(&input, output.as_deref(), config),
        Command::Sample { name, output } => commands::sample(&name, output.as_deref(), config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kdvscatter: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
