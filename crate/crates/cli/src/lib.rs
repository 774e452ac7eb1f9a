//! Command-line front end for the constructible-function calculus: document
//! formats, the worked-example catalog, formula verification, and the
//! randomized fuzzing harness.

use std::fmt;

pub mod catalog;
pub mod commands;
pub mod documents;
pub mod fuzz;
pub mod verify;

/// Anything that makes a command unable to run; always maps to exit code 2.
/// Formula failures are not errors — they are reported and exit with 1.
#[derive(Debug)]
pub enum CliError {
    Core(stratachi_core::Error),
    Parse(String),
    Io(String),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<stratachi_core::Error> for CliError {
    fn from(e: stratachi_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// Exit codes: 0 all checks pass, 1 a formula check failed, 2 invalid input.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
