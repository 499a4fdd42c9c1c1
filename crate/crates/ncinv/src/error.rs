//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rational scalar {0:?}: expected \"p\" or \"p/q\" with q != 0")]
    InvalidScalar(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("subspace is not contained in the claimed ambient space")]
    NotSubspace,

    #[error("operands belong to different arenas")]
    ArenaMismatch,

    #[error("operands belong to different contexts")]
    ContextMismatch,

    #[error("tensor element is not a Lie element")]
    NotLieElement,

    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("group not verified finite within cap {cap}")]
    GroupCapExceeded { cap: usize },

    #[error("degree {requested} exceeds configured cap {cap}")]
    DegreeCapExceeded { requested: usize, cap: usize },

    #[error("non-integer trace average: {0}; this indicates an implementation bug")]
    NonIntegerTrace(String),

    #[error("invariant dimension oracles disagree: trace average {trace} vs Reynolds rank {rank}")]
    OracleMismatch { trace: usize, rank: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
