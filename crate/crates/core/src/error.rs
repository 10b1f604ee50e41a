use thiserror::Error;

/// Errors raised by constructions, decoders and file handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("singular linear system")]
    Singular,
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error("ambiguous marker match: {0}")]
    Ambiguous(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
