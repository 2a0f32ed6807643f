//! Command-line front end: `solve`, `generate`, `evaluate` and `sweep`.
//!
//! [`run`] parses arguments and returns the process exit code, so the whole
//! surface can be exercised in-process.

mod evaluate;
mod generate;
mod solve;
mod sweep;

use std::ffi::OsString;
use std::fmt;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
/// The starting point is outside the dual domain.
pub const EXIT_INFEASIBLE: i32 = 2;
/// Iteration limit or line search stall.
pub const EXIT_NOT_CONVERGED: i32 = 3;
/// Bad flags, unreadable or invalid input files.
pub const EXIT_BAD_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "dspg", version, about = "Sparse inverse covariance estimation by a dual spectral projected gradient method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the instance described by a manifest.
    Solve(solve::Args),
    /// Generate a synthetic instance with its ground-truth precision matrix.
    Generate(generate::Args),
    /// Score an estimated precision matrix against the truth.
    Evaluate(evaluate::Args),
    /// Solve one instance over a grid of uniform penalties.
    Sweep(sweep::Args),
}

/// A failed command: exit code plus a message for stderr.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    pub(crate) fn bad_input(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_BAD_INPUT,
            message: message.to_string(),
        }
    }
}

impl From<dspg_core::Error> for Failure {
    fn from(e: dspg_core::Error) -> Self {
        let code = match e {
            dspg_core::Error::Infeasible(_) => EXIT_INFEASIBLE,
            _ => EXIT_BAD_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub(crate) type CmdResult = Result<i32, Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_BAD_INPUT,
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Generate(a) => generate::run(a),
        Command::Evaluate(a) => evaluate::run(a),
        Command::Sweep(a) => sweep::run(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
