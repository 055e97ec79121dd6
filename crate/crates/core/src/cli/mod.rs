//! Command-line front end: run configuration, orchestration and output.
//!
//! Every subcommand reads a [`RunConfig`], computes, and then writes all of
//! its files at once into the output directory. Exit codes: 0 success,
//! 1 I/O failure, 2 malformed configuration, 3 numerical failure (an error
//! or an unconverged mandatory computation), 4 failed validation.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;
pub mod validate;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{execute, Outcome, Status};
pub use config::RunConfig;

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "btfloquet", version, about = "Floquet/monodromy spectra of -Δ + igx on perforated planes")]
pub struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` of the config.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Overrides `seed` of the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub plots: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Monodromy branch values at one (g, q).
    Spectrum,
    /// Branch values over a q list with continuation.
    Sweep,
    /// Spectrum of the truncated strip operator.
    Strip,
    /// Monodromy against strip, modulo ig.
    Crosscheck,
    /// Strip eigenfunction from monodromy snapshots.
    Reconstruct,
    /// Resolvent norms of the strip operator on a z window.
    Pseudospectra,
    /// Leftmost branch over a g list against the Airy law.
    Asymptotics,
    /// Oracle and invariant suite.
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
            Command::Strip => "strip",
            Command::Crosscheck => "crosscheck",
            Command::Reconstruct => "reconstruct",
            Command::Pseudospectra => "pseudospectra",
            Command::Asymptotics => "asymptotics",
            Command::Validate => "validate",
        }
    }
}

pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Geometry(_) | Error::Topology(_) | Error::Domain(_) => EXIT_CONFIG,
        Error::Io(_) => EXIT_IO,
        Error::DimensionMismatch { .. }
        | Error::NoConvergence { .. }
        | Error::ZeroMultiplier
        | Error::NotConverged(_) => EXIT_NUMERIC,
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    let Some(path) = &cli.config else {
        eprintln!("error: --config <PATH> is required");
        return EXIT_CONFIG;
    };
    let mut cfg = match RunConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));

    let job = || execute(cli.command, &cfg, &out, cli.plots);
    let result = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be >= 1");
            return EXIT_CONFIG;
        }
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(job),
            Err(e) => {
                eprintln!("error: cannot start thread pool: {e}");
                return EXIT_IO;
            }
        },
        None => job(),
    };
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            match &outcome.status {
                Status::Ok => 0,
                Status::Numerical(msg) => {
                    eprintln!("numerical failure: {msg}");
                    EXIT_NUMERIC
                }
                Status::Validation(msg) => {
                    eprintln!("validation failed: {msg}");
                    EXIT_VALIDATION
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
