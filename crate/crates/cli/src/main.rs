//! `posbound`: evaluate, compare and verify upper bounds for `P(X = 0)`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or
//! parameter error.

mod args;
mod commands;
mod report;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// A bad flag or parameter; reported on stderr with exit code 2.
#[derive(Debug)]
pub struct UsageError(String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        UsageError(msg.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<posbound::Error> for UsageError {
    fn from(e: posbound::Error) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Compare(a) => commands::compare(a),
        Command::Verify(a) => commands::verify(a),
        Command::Mc(a) => commands::mc(a),
        Command::LemmaCheck(a) => commands::lemma_check(a),
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
