use thiserror::Error;

/// A parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("key polynomial must be monic and non-constant, got {0}")]
    BadKey(String),

    #[error("invalid augmentation: {0}")]
    Augmentation(String),

    #[error("empty interval: lower endpoint {lower} is not below upper endpoint {upper}")]
    EmptyInterval { lower: String, upper: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value {0} has significant coordinates past the second; no rank-1 quasi-cut is assigned")]
    RankTooLarge(String),

    #[error("unsupported sequence limit: {0}")]
    UnsupportedLimit(String),

    #[error("invalid family: {0}")]
    Family(String),

    #[error("polynomial {poly} is not stable for the family: {detail}")]
    Unstable { poly: String, detail: String },

    #[error("stability of {0} undetermined at the cutoff")]
    Undetermined(String),

    #[error("all polynomials examined are stable for the family ({0}); use the stable limit")]
    AllStable(String),

    #[error("table is not closed enough for any check; missing entries: {0}")]
    TableNotClosed(String),

    #[error("chains live over different base primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
}

pub type Result<T> = std::result::Result<T, Error>;
