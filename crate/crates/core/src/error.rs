use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The estimator divides by cos(theta); at the amplitude quadrature it is undefined.
    #[error("degenerate measurement quadrature: |cos(theta)| = {cos_theta:e} is below {tolerance:e}")]
    DegenerateQuadrature { cos_theta: f64, tolerance: f64 },

    #[error("measured quadrature carries no signal (x0 coefficient is zero)")]
    ZeroSignal,

    #[error("mechanical susceptibility is singular at nu = {nu:e} rad/s")]
    SusceptibilitySingularity { nu: f64 },

    #[error("momentum-coupled force estimator is undefined at nu = 0")]
    ZeroFrequency,

    #[error("moment matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("operator basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("unknown operator label `{0}`")]
    UnknownLabel(String),

    #[error("linear system is singular")]
    SingularSystem,

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Rejects NaN/inf and values below `min` (inclusive bound).
pub(crate) fn require_at_least(name: &'static str, value: f64, min: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::invalid(name, format!("must be finite, got {value}")));
    }
    if value < min {
        return Err(Error::invalid(name, format!("must be >= {min}, got {value}")));
    }
    Ok(value)
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::invalid(
            name,
            format!("must be positive and finite, got {value}"),
        ));
    }
    Ok(value)
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::invalid(name, format!("must be finite, got {value}")));
    }
    Ok(value)
}
