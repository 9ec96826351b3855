//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entry is not finite: {0}")]
    NonFinite(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("sign matrix entry at ({row},{col}) is {value}, expected +1 or -1")]
    InvalidSign { row: usize, col: usize, value: String },

    #[error("probability entry at ({row},{col}) is negative: {value}")]
    NegativeProbability { row: usize, col: usize, value: String },

    #[error("probabilities sum to {sum}, expected exactly 1")]
    NotNormalized { sum: String },

    #[error("game size m={m} exceeds the exact-enumeration cap of {cap}")]
    EnumerationCap { m: usize, cap: usize },

    #[error("graph has {vertices} vertices, exceeding the exact solver cap of {cap}")]
    GraphTooLarge { vertices: usize, cap: usize },

    #[error("SDP dimension {dim} exceeds the dense solver cap of {cap}")]
    SdpTooLarge { dim: usize, cap: usize },

    #[error("tolerance {0} is outside the accepted range (0, 1e-4]")]
    InvalidTolerance(f64),

    #[error("SDP solver failed: {0}")]
    SolverFailure(String),

    #[error("game matrix has an all-zero row or column; the certificate is undefined for it")]
    ZeroRowOrColumn,

    #[error("strategy achieves bias {achieved}, not the optimal {optimal}")]
    NonOptimalStrategy { achieved: String, optimal: String },

    #[error("operation not applicable: {0}")]
    NotApplicable(String),

    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("family parameters are infeasible: {0}")]
    InfeasibleFamily(String),

    #[error("malformed game description: {0}")]
    Schema(String),

    #[error("malformed rational literal {literal:?}: {reason}")]
    BadRational { literal: String, reason: String },
}
