//! CLI error taxonomy mapped onto process exit codes.

use std::fmt;

/// Exit codes: 0 success, 1 usage, 2 domain/geometry, 3 I/O.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag combinations.
    Usage(String),
    /// Valid invocation, but the parameters fall outside the model's domain.
    Domain(String),
    /// File system or file format trouble.
    Io(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Domain(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<kvamp_core::Error> for CliError {
    fn from(err: kvamp_core::Error) -> Self {
        CliError::Domain(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
