//! Command-line front end for sparsity-based fairness evaluation.
//!
//! Subcommands: `evaluate` (criterion on a CSV, JSON report), `check`
//! (axiom and theorem verification), `sweep` (criterion vs. number of
//! groups), `surface` (measure over the 3-simplex) and `gen` (simulated
//! scenarios as CSV).
//!
//! Exit codes: 0 success, 1 a check disagreed with its expectation, 2 bad
//! input or usage.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod output;

pub use args::Cli;
pub use error::{CliError, CliResult};

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli) -> CliResult<i32> {
    use args::Command;
    match &cli.command {
        Command::Evaluate(a) => commands::evaluate::run(a),
        Command::Check(a) => commands::check::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
        Command::Surface(a) => commands::surface::run(a),
        Command::Gen(a) => commands::gen::run(a),
    }
}
