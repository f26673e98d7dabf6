use thiserror::Error;

/// Errors raised by the shape, embedding and construction layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("more than one red leaf")]
    MultipleRedLeaves,

    #[error("node with {children} children violates arity bound d = {arity}")]
    Arity { children: usize, arity: usize },

    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("arity must be at least 2, got {0}")]
    InvalidArity(usize),

    #[error("shape has no red leaf")]
    NoRedLeaf,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
