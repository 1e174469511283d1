use thiserror::Error;

use crate::model::ScenarioError;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Scenario(#[from] ScenarioError),

    #[error("length mismatch for {what}: expected {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("covariance matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("covariance violates the uncertainty relation (min eigenvalue {0:.3e})")]
    Unphysical(f64),

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("the two baths do not share one discretization grid")]
    GridMismatch,

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("quadrature too coarse: {0}")]
    InsufficientQuadrature(String),

    #[error("Fock cutoff leakage {leakage:.3e} exceeds gate {gate:.1e}")]
    FockLeakage { leakage: f64, gate: f64 },

    #[error("zero temperature is singular for the position kernel; use the ground-state kernel limit")]
    ZeroTemperature,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
