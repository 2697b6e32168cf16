use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("d = {0} is not a squarefree integer > 1")]
    InvalidField(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("out of precision: {0}")]
    OutOfPrecision(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid prime: {0}")]
    InvalidPrime(String),
    #[error("invalid representative: {0}")]
    InvalidRepresentative(String),
    #[error("character ill-defined: {reason} (witness {witness})")]
    IllDefined { reason: String, witness: String },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("ring/weight violation of condition ({condition}): {reason}")]
    RingWeight { condition: u8, reason: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Errors caused by bad input rather than a bug or environment failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

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

pub type Result<T> = std::result::Result<T, Error>;
