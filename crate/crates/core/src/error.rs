use thiserror::Error;

/// Errors raised by the linear-algebra kernels and the pursuit algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PursuitError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no candidate atoms remain outside the excluded set")]
    EmptyCandidates,

    /// The Schur complement of a Gram extension (or a Cholesky pivot) fell
    /// below the tolerance. `support` is the offending support in 0-based indices.
    #[error("near-singular Gram matrix on support {support:?} (pivot {pivot:e})")]
    NearSingular { support: Vec<usize>, pivot: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T, E = PursuitError> = std::result::Result<T, E>;
