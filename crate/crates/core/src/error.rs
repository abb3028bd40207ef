use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },

    #[error("graph is not chordal")]
    NotChordal,

    #[error("entry ({row}, {col}) is nonzero but lies outside the sparsity pattern")]
    PatternViolation { row: usize, col: usize },

    /// A monomial couples variables that share no clique of the cover.
    #[error("monomial {monomial} is not supported on any clique of the cover")]
    NotCorrelativelySparse { monomial: String },

    #[error("conic solver failed: {0}")]
    NumericalFailure(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
