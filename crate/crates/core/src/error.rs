use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multi-index {index} is not a degree-{d} monomial in {n} variables")]
    NotInBasis { index: String, n: usize, d: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("cone is not pointed: constraint rank {rank} < dimension {dim}")]
    NotPointed { rank: usize, dim: usize },

    #[error("dimension {dim} exceeds the brute-force limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("point violates constraint {row}")]
    Infeasible { row: usize },

    #[error("ray {ray} has non-positive level value")]
    NonPositiveLevel { ray: usize },

    #[error("prolongation has a negative coefficient at position {position}")]
    NotSos { position: usize },

    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("time limit exceeded")]
    TimedOut,
}
