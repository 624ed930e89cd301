use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("not a stabilizer group: {0}")]
    NotStabilizer(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("size cap exceeded: {what} needs {needed}, limit is {limit}")]
    SizeCap { what: String, needed: u128, limit: u128 },

    #[error("index out of range: {0}")]
    InvalidIndex(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
