//! `corset`: batch front end for the finite-ball diagnostics.
//!
//! Reads a JSON run spec, applies flag overrides, runs one command and writes
//! CSV/DOT artifacts plus `manifest.json` into the output directory.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use corset_core::Error;

use crate::args::Cli;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Spec(_) | Error::Representation(_) | Error::Domain(_) => 2,
        Error::Budget { .. } => 3,
        Error::InsufficientRadius(_) | Error::InsufficientDepth(_) => 4,
        Error::Invariant(_) => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("corset: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("corset: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
