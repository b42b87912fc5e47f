use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed ballot file: {0}")]
    Ballot(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("overflow: {0}")]
    Overflow(String),
    /// A bound was requested outside the range where it is proved.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    /// Support of a distribution falls outside a declared ball.
    #[error("support outside ball: {0}")]
    OutsideBall(String),
    /// A work-size guard refused to run an enumeration.
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
