use std::fmt;

/// Errors produced by configuration validation, the optimizers, and the bench driver.
#[derive(Debug)]
pub enum Error {
    /// A configuration value violates its documented constraints.
    InvalidConfig(String),
    /// An antenna-group mask violates its construction invariants.
    InvalidAag(String),
    /// An enumeration was refused because the combination count exceeds the guard.
    EnumerationGuard { combinations: u128, guard: u128 },
    /// A numeric routine broke down (eigensolver failure, non-finite gradient, ...).
    Numeric(String),
    /// An experiment file key is missing or malformed.
    Spec { key: String, reason: String },
    /// Filesystem failure while reading a spec or writing results.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            Error::InvalidAag(msg) => write!(f, "invalid antenna group: {msg}"),
            Error::EnumerationGuard { combinations, guard } => write!(
                f,
                "refusing to enumerate {combinations} antenna groups (guard: {guard}); raise the guard to force"
            ),
            Error::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            Error::Spec { key, reason } => write!(f, "experiment spec: key `{key}`: {reason}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
