//! `hdx`: generators, Cheeger constants, cosystoles, spectra, covers and
//! correction experiments from the command line.
//!
//! Exit codes: 0 when every checked inequality holds, 2 when one fails,
//! 1 on usage, input or size-guard errors.

mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hdx_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run::run(&cli) {
        Ok(run::Outcome::Holds) => ExitCode::SUCCESS,
        Ok(run::Outcome::Violated(what)) => {
            eprintln!("inequality violated: {what}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(hdx_core::Error::SizeGuard { .. }) = e {
                eprintln!("hint: use a heuristic mode or a smaller degree");
            }
            ExitCode::from(1)
        }
    }
}
