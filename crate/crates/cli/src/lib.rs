//! Command-line harness for the optimizer: single runs, seed batches, the
//! worked-example replay and the objective catalog.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

use fdo_core::FdoError;

pub mod commands;
pub mod settings;

use settings::{Cli, Command, DEFAULT_OUT_DIR, OUT_DIR_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("replay fixtures do not match:\n{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<FdoError> for CliError {
    fn from(err: FdoError) -> Self {
        match err {
            FdoError::TableExhausted { .. }
            | FdoError::NonFiniteFitness { .. }
            | FdoError::NonMonotoneHistory { .. }
            | FdoError::Io(_) => CliError::Runtime(err.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = write!(stderr, "{err}");
            return if err.use_stderr() { EXIT_CONFIG } else {
                let _ = write!(stdout, "{err}");
                EXIT_OK
            };
        }
    };
    let env_out = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let outcome = match &cli.command {
        Command::Run(args) => settings::resolve(args, env_out, "0")
            .and_then(|s| commands::cmd_run(&s, stdout)),
        Command::Bench(args) => settings::resolve(args, env_out, "0..30")
            .and_then(|s| commands::cmd_bench(&s, stdout)),
        Command::ReplayPaper(args) => {
            let out = args
                .out
                .clone()
                .or(env_out)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
            commands::cmd_replay_paper(args, &out, stdout)
        }
        Command::ListObjectives => commands::cmd_list_objectives(stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            err.exit_code()
        }
    }
}
