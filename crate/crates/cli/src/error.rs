use std::fmt;

use ltfsm_core::Error;

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, config file or configuration constraint; exit 2.
    Config(String),
    /// A validation statistic missed its threshold; exit 3.
    Threshold(String),
    /// Anything else; exit 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Threshold(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Threshold(m) => write!(f, "threshold failure: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => CliError::Config(m),
            e @ (Error::Domain(_) | Error::UnknownStrategy { .. }) => CliError::Config(e.to_string()),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
