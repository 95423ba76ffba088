use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (JSON, rationals, vertex lists).
    #[error("parse error: {0}")]
    Parse(String),

    /// Input is well-formed but violates a model constraint.
    #[error("invalid source: {0}")]
    InvalidSource(String),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// The operation only applies to a narrower class of sources.
    #[error("unsupported source: {0}")]
    Unsupported(String),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("set function is not {0}")]
    NotSubmodular(String),

    /// Two independent computations of the same quantity disagree. Always a bug.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors caused by malformed input text rather than domain constraints.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
