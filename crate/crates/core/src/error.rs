//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight matrix has a negative entry at ({row}, {col})")]
    NegativeWeight { row: usize, col: usize },

    #[error("weight matrix has zero l1 norm")]
    ZeroWeights,

    #[error("instance is not normalized; call normalize() first")]
    NotNormalized,

    #[error("ground truth is identically zero; use the zero-truth classifier")]
    ZeroTruth,

    #[error("point has a non-finite entry at index {0}")]
    NonFinitePoint(usize),

    #[error("dimension {n} exceeds the enumeration limit {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("{0} is not an independent set of the graph")]
    NotIndependent(String),

    #[error("independent set is not maximum: found a larger one of size {larger}")]
    NotMaximal { larger: usize },

    #[error("no cubic root inside the required bracket (m = {m}, eps = {eps})")]
    NoRootInBracket { m: usize, eps: f64 },

    #[error("constructed point failed verification: {0}")]
    VerificationFailed(String),

    #[error("instance file error: {0}")]
    InstanceFile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
