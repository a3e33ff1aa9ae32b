mod args;
mod commands;
mod reproduce;

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};

/// Failure of a subcommand: a domain error from the core crate or an
/// output problem, both reported as a JSON object with exit code 1.
#[derive(Debug, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl From<qlc_core::QlcError> for CliError {
    fn from(e: qlc_core::QlcError) -> Self {
        CliError { kind: e.kind().to_string(), message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { kind: "Io".into(), message: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError { kind: "Serialization".into(), message: e.to_string() }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError { kind: "Io".into(), message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Destination for command output: the `--out` file or stdout.
pub fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn init_logging() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QLC_LOG", "error"))
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    let result = match &cli.command {
        Command::Classify(a) => commands::classify(a),
        Command::Levels(a) => commands::levels(a),
        Command::Mu(a) => commands::mu(a),
        Command::HopfSolve(a) => commands::hopf_solve(a),
        Command::Scan(a) => commands::scan(a),
        Command::Zeros(a) => commands::zeros(a),
        Command::Simulate(a) => commands::simulate(a, cli.tol),
        Command::Cycles(a) => commands::cycles(a),
        Command::Reproduce(a) => reproduce::run(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let text = serde_json::to_string(&e).unwrap_or_else(|_| format!("{e:?}"));
            eprintln!("{text}");
            ExitCode::from(1)
        }
    }
}
