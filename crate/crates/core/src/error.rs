use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected an odd positive integer, got {0}")]
    NotOddPositive(String),

    #[error("E-sequence terms must be positive (term {index} is 0)")]
    ZeroTerm { index: usize },

    #[error("operation requires a non-empty prefix")]
    EmptyPrefix,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("exponent sum {bits} exceeds the bit cap of {cap}")]
    BitCapExceeded { bits: u64, cap: u64 },

    #[error("depth {depth} is insufficient for {what}")]
    DepthExhausted { depth: usize, what: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
