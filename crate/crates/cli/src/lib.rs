//! `frw` command-line tool: classification, sampled solutions, the
//! verification suite, ₂F₁ evaluation and table export.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

use std::ffi::OsString;

use clap::Parser;
use frw_core::validate::DEFAULT_TOL;

use args::{Cli, Command};
use commands::Context;
pub use error::{CliError, EXIT_FAILED, EXIT_USAGE};

/// Parses `argv` and runs the subcommand; returns the process exit status.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let env_tol = config::env_tolerance()?;
    let ctx = Context {
        default_tol: env_tol.unwrap_or(DEFAULT_TOL),
        env_tol,
    };
    match &cli.command {
        Command::Classify(a) => commands::classify::run(a),
        Command::Solve(a) => commands::solve::run(a, &ctx),
        Command::Validate(a) => commands::validate::run(a, &ctx),
        Command::Hyp2f1(a) => commands::hyp2f1::run(a),
        Command::Table(a) => commands::table::run(a),
    }
}
