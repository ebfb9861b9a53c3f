use thiserror::Error;

/// Errors raised by shape construction, potential evaluation and the
/// verification harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A shape could not be built from the given parameters.
    #[error("invalid shape: {0}")]
    Construction(String),

    /// A run or solver configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical procedure did not reach its accuracy target.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A shape or config file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
