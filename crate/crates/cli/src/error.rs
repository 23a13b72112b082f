use std::fmt;

use dualradix_core::Error;

/// Failures mapped to process exit codes: bad input exits 2, a violated
/// invariant exits 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "invalid input: {msg}"),
            CliError::Invariant(msg) => write!(f, "invariant failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Invariant(_) => CliError::Invariant(err.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
