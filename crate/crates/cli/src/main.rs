//! `equilib` command-line front end. Every subcommand writes CSV with
//! `#`-prefixed metadata lines followed by a header row.

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit code for a verification run that missed a tolerance.
const EXIT_VERIFY: u8 = 1;
/// Exit code for usage, input and domain errors.
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
