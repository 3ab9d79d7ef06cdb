//! `sievecalc`: command-line front end for the sieve verification toolkit.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use sievecalc_core::Error;

use args::Cli;

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed = 0,
    CheckFailed = 1,
    Usage = 2,
    Budget = 3,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Passed
        } else {
            Status::CheckFailed
        }
    }
}

/// Exit code for a library error.
fn error_status(e: &Error) -> Status {
    match e {
        Error::Budget { .. } | Error::NoConvergence { .. } => Status::Budget,
        Error::OutOfRange { .. }
        | Error::HypothesisViolation(_)
        | Error::Domain(_)
        | Error::Precision(_)
        | Error::Parse { .. } => Status::Usage,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage as u8 } else { 0 });
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(Status::Usage as u8);
        }
    }
    match commands::run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_status(&e) as u8)
        }
    }
}
