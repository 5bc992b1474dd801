//! Library side of the `vblowup` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod expr;
pub mod output;
pub mod problem_file;

use std::io::Write;

use args::{Cli, Command};
use error::CliError;

/// Runs a parsed command line, writing its output, and returns the exit code.
pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    let (outcome, out) = match &cli.command {
        Command::Run(a) => (commands::run(a)?, &a.output),
        Command::Sweep(a) => (commands::sweep(a)?, &a.output),
        Command::Intersect(a) => (commands::intersect(a)?, &a.output),
        Command::Check(a) => (commands::check(a)?, &a.output),
    };
    match &out.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|source| CliError::Write { path: path.display().to_string(), source })?,
        None => std::io::stdout()
            .write_all(outcome.text.as_bytes())
            .map_err(|source| CliError::Write { path: "standard output".into(), source })?,
    }
    Ok(outcome.exit)
}
