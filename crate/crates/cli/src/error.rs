use std::fmt;
use std::process::ExitCode;

use dirac_core::Error;

/// Failure of a run, classified by the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Engine(Error),
    /// Unreadable job, input or config file, or an unwritable output.
    Io(String),
    /// Malformed job, parameters or input documents.
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Engine(e) => match e {
                Error::Parse(_) | Error::Structural(_) => 2,
                Error::Domain(_) | Error::Unsupported(_) => 3,
                Error::Resource(_) => 4,
                Error::Internal(_) => 5,
            },
        }
    }

    /// Machine-readable error class for reports.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Engine(e) => match e {
                Error::Parse(_) => "parse",
                Error::Structural(_) => "structural",
                Error::Domain(_) => "domain",
                Error::Unsupported(_) => "unsupported",
                Error::Resource(_) => "resource",
                Error::Internal(_) => "internal",
            },
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}
