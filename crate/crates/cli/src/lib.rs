//! Command-line front end for `fixpt-core`: solver runs with CSV traces,
//! contraction certificates and C-class reports as JSON, parameter sweeps.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use cli::{Cli, Command};
use error::CliResult;

/// Runs one parsed invocation and returns its exit code.
pub fn dispatch(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Run(a) => commands::run(a),
        Command::VerifyContraction(a) => commands::verify_contraction(a),
        Command::VerifyCclass(a) => commands::verify_cclass(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::ListProblems => commands::list_problems(),
        Command::ListTriples => commands::list_triples(),
    }
}
