use thiserror::Error;

/// Errors raised by the cloner library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Operands of a tensor product were of different kinds (state vs. operator).
    #[error("cannot form a tensor product of a state and an operator")]
    KindMismatch,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid Choi matrix: {0}")]
    InvalidChoi(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A numerical self-check failed (e.g. the closed-form root is not the maximiser).
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {x}")))
    }
}

/// Accepts θ ∈ [0, π].
pub(crate) fn check_polar(theta: f64) -> Result<()> {
    check_finite("theta", theta)?;
    if (0.0..=std::f64::consts::PI).contains(&theta) {
        Ok(())
    } else {
        Err(domain(format!("theta = {theta} is outside [0, pi]")))
    }
}
