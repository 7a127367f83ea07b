use alloc::string::String;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not selfadjoint")]
    NotSelfadjoint,
    #[error("matrix is not Hermitian (relative defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is singular or numerically not invertible")]
    Singular,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("negative density {value:e} at x = {x}")]
    NegativeDensity { x: f64, value: f64 },
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("trace oracle failed: {0}")]
    Oracle(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
