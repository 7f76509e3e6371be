//! `laguerre`: kernel queries, matrix dumps, scans, verification and
//! evolution runs for the discrete Laguerre operator.
//!
//! Exit status: 0 on success, 1 when a verification or bound check fails,
//! 2 for invalid invocations and arguments the library rejects.

mod args;
mod commands;
mod emit;
mod parse;
mod verify;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use crate::args::{Cli, Command};

const THREADS_VAR: &str = "LAGUERRE_THREADS";

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Kernel(a) => commands::kernel(a),
        Command::Matrix(a) => commands::matrix(a),
        Command::NormScan(a) => commands::norm_scan(a),
        Command::Verify(a) => verify::verify(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::Resolvent(a) => commands::resolvent(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
