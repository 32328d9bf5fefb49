use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown mnemonic `{mnemonic}`")]
    UnknownMnemonic { line: usize, mnemonic: String },

    #[error("index {index} out of range for register of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("duplicate index {0} within a single gate")]
    DuplicateIndex(usize),

    #[error("invalid levels: {0}")]
    InvalidLevels(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("circuit contains a measurement, which has no unitary inverse or matrix")]
    Measurement,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("register dimension {dim} exceeds the budget of {cap}")]
    BudgetExceeded { dim: usize, cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("transition graph is not connected")]
    DisconnectedGraph,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
