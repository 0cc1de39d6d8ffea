use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MqcError {
    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge (best residual {residual:.3e})")]
    NoConvergence { what: &'static str, residual: f64 },

    #[error("aliasing: {samples} samples cannot resolve coherence orders up to {m_max}")]
    Aliasing { samples: usize, m_max: usize },

    #[error("invalid sampling grid: {0}")]
    InvalidGrid(String),

    #[error("closed-form branch inconsistency: imaginary residue {residue:.3e}")]
    BranchInconsistency { residue: f64 },

    #[error("peak on scan boundary at index {index}; widen the scan")]
    PeakOnBoundary { index: usize },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, MqcError>;
