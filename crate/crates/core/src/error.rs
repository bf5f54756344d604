use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible operands: {0}")]
    IncompatibleOperands(String),

    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("undefined distribution: every transition amplitude vanishes")]
    UndefinedDistribution,

    #[error("malformed configuration: {0}")]
    MalformedConfiguration(String),

    #[error("graph state construction failed: {0}")]
    Construction(String),

    #[error("unknown {0}")]
    Unknown(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
