use thiserror::Error;

use crate::parser::ParseError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different variable contexts")]
    ContextMismatch,
    #[error("variable index {index} out of range for a context of {len} variables")]
    InvalidVariable { index: usize, len: usize },
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("Gröbner basis budget of {limit} reductions exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("point is not on {0}")]
    PointNotOnVariety(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
