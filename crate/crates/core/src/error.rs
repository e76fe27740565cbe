use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("sparsity level {k} out of range for dimension {dim}")]
    SparsityOutOfRange { k: usize, dim: usize },

    #[error("box center has {nonzeros} nonzeros but sparsity level is {k}")]
    CenterNotSparse { nonzeros: usize, k: usize },

    #[error("box radius must be nonnegative and finite")]
    InvalidRadius,

    #[error("vectors must have at least one component")]
    EmptyVector,

    #[error("instance too large for enumeration: n = {dim}, C(n, k) = {pieces}")]
    InstanceTooLarge { dim: usize, pieces: u128 },

    #[error("point is not a member of the constraint set")]
    Infeasible,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite objective or model value")]
    NonFiniteObjective,

    #[error("invalid instance dimensions: {0}")]
    InvalidDimensions(String),

    #[error("malformed instance file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
