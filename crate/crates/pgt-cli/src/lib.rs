//! Command-line front end. `run` parses arguments, dispatches and writes artifacts.

pub mod args;
mod commands;
pub mod dto;
pub mod validate;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use pgt_core::chain::ChainError;
use pgt_core::dynamics::DynamicsError;
use pgt_core::oracle::OracleError;
use pgt_core::pgtlab::PgtError;
use pgt_core::spectral::SpectralError;
use thiserror::Error;

pub use args::{Cli, Command, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid chain: {0}")]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Search(#[from] PgtError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} of {1} validation checks failed")]
    ValidationFailed(usize, usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Chain(_) => 2,
            _ => 1,
        }
    }
}

/// Text produced by a command: the primary artifact and an optional staircase CSV.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub primary: String,
    pub staircase: Option<String>,
    /// Set when the command ran but its checks failed.
    pub failure: Option<CliError>,
}

pub fn execute(cli: &Cli) -> Result<Artifacts, CliError> {
    commands::dispatch(cli)
}

fn write_out(cli: &Cli, art: &Artifacts) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => fs::write(path, &art.primary)?,
        None => std::io::stdout().lock().write_all(art.primary.as_bytes())?,
    }
    if let Some(csv) = &art.staircase {
        let target: Option<PathBuf> = match &cli.command {
            Command::PgtSearch { staircase: Some(p), .. } => Some(p.clone()),
            _ => cli.output.as_ref().map(|p| p.with_extension("csv")),
        };
        if let Some(p) = target.filter(|p| Some(p) != cli.output.as_ref()) {
            fs::write(p, csv)?;
        }
    }
    Ok(())
}

/// Full process behaviour; returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool already configured: {e}");
        }
    }
    let result = execute(&cli).and_then(|art| {
        write_out(&cli, &art)?;
        match art.failure {
            Some(f) => Err(f),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("run `pgt --help` for usage");
            }
            e.exit_code()
        }
    }
}
