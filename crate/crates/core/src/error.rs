use thiserror::Error;

/// Errors raised by the operator algebra, the solvers and the phase-space tooling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("{what} is not normalized (norm = {norm})")]
    NotNormalized { what: &'static str, norm: f64 },

    #[error("{what} is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { what: &'static str, deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("phase-space normalization {value} outside [{lo}, {hi}]; grid too small for this state")]
    Normalization { value: f64, lo: f64, hi: f64 },

    #[error("boundary mass {mass:e} exceeds {limit:e}; grid too small for this state")]
    BoundaryMass { mass: f64, limit: f64 },

    #[error("Fock truncation overflow: weight {weight:e} in the top level exceeds {limit:e}")]
    TruncationOverflow { weight: f64, limit: f64 },

    #[error("norm drifted by {drift:e} (limit {limit:e}); step too large or truncation too small")]
    NormDrift { drift: f64, limit: f64 },

    #[error("step too large: dt * ||H_I|| = {value} exceeds {limit}")]
    StepTooLarge { value: f64, limit: f64 },

    #[error("conditioning on a field value with vanishing probability (|psi| = {norm:e})")]
    VanishingNorm { norm: f64 },

    #[error("observable has no polynomial form or its degree {degree} exceeds {max}")]
    NotPolynomial { degree: usize, max: usize },

    #[error("wrong wave representation: expected {expected}")]
    Representation { expected: &'static str },

    #[error("malformed field file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
