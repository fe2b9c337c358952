use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("missing dictionary entry `{0}`")]
    MissingGate(String),
    #[error("degenerate measurement: outcome probability {0:e}")]
    DegenerateMeasurement(f64),
    #[error("non-finite values encountered: {0}")]
    NonFinite(&'static str),
    #[error("line search failed")]
    LineSearch,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = core::result::Result<T, Error>;
