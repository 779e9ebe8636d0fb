//! Command-line front end: every run is driven by a TOML config and writes
//! CSV time series plus JSON summaries tagged with the config hash.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;

pub use config::{Config, Loaded};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Core(skyrme_core::Error),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl From<skyrme_core::Error> for CliError {
    fn from(e: skyrme_core::Error) -> Self {
        match e {
            skyrme_core::Error::NonFinite { t } => CliError::NonFinite(t),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// 1 failed check, 2 bad config or input, 3 non-finite state, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Core(skyrme_core::Error::Io(_) | skyrme_core::Error::Csv(_)) => 4,
            CliError::Core(_) => 2,
            CliError::NonFinite(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "skyrme", version, about = "Equivariant Skyrme evolver and diagnostics")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for spatial sweeps and batteries.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory, overriding `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum Command {
    /// Evolve the configured data and write the time series and summary.
    Simulate,
    /// Run the multiplier oracle battery and the discrete residual study.
    IdentityCheck,
    /// Self-convergence of the solver over doubling resolutions.
    Converge,
    /// Energy, annulus energy and cone averages versus distance to the apex.
    ConcentrationStudy,
    /// Write the built initial state as `r,u,v` CSV.
    InitDump,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let path = cli.config.as_deref().ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let loaded = Config::load(path)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Simulate => commands::simulate::run(&loaded, out),
        Command::IdentityCheck => commands::identity::run(&loaded, out),
        Command::Converge => commands::converge::run(&loaded, out),
        Command::ConcentrationStudy => commands::concentration::run(&loaded, out),
        Command::InitDump => commands::init_dump::run(&loaded, out),
    }
}

pub fn main_with(cli: &Cli) -> ExitCode {
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skyrme: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
