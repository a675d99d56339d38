use thiserror::Error;

/// Errors produced by the estimators, operators and approximants in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("function undefined at quadrature node {theta:e}")]
    Domain { theta: f64 },

    #[error("pole evaluation: x = {x:e} coincides with a real pole")]
    PoleEvaluation { x: f64 },

    #[error("pivot breakdown for pole {pole} at Lanczos step {step}")]
    PivotBreakdown { pole: usize, step: usize },

    #[error("target accuracy {target:e} unreachable; best uniform error {best:e} at K = {best_k}")]
    UnreachableAccuracy { target: f64, best: f64, best_k: usize },

    #[error("delta calibration failed: {0}")]
    Calibration(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
