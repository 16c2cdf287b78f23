//! `hhbv`: Hochschild cohomology, Gerstenhaber bracket and BV operator from the command line.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 input or configuration error.

mod config;
mod report;
mod suites;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Info(args) => report::info(args),
        Command::Hh(args) => report::hh(args),
        Command::Bv(args) => report::bv(args),
        Command::Export(args) => report::export(args),
        Command::Verify(args) => suites::verify(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
