use std::fmt;
use std::process::ExitCode;

/// Errors carry the exit status they map to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or rule files.
    Config(String),
    /// Unreadable or malformed input, unwritable output.
    Io(String),
    /// A bug: a report that should not be able to fail did.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Internal(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "input/output error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn config(m: impl fmt::Display) -> CliError {
    CliError::Config(m.to_string())
}

pub fn io(m: impl fmt::Display) -> CliError {
    CliError::Io(m.to_string())
}
