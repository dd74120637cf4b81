use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates one of the documented model rules.
    #[error("invalid `{field}`: {rule}")]
    Validation { field: String, rule: String },

    /// The fitted stiffness `kappa0 / (1 - 2s)` has a pole at s = 0.5.
    #[error("strain {strain} is at or beyond the stiffness pole at s = 0.5")]
    StrainPole { strain: f64 },

    #[error("no sign change on the bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root finder stopped after {iterations} iterations with residual {residual:e}")]
    RootNonConvergence { iterations: usize, residual: f64 },

    /// The adaptive integrator gave up. `state` is the last accepted state.
    #[error("integration stopped at x = {x} after {steps} steps: {reason}")]
    IntegrationNonConvergence {
        x: f64,
        steps: usize,
        state: Vec<f64>,
        reason: &'static str,
    },

    #[error("zero pivot in tridiagonal elimination at row {index}")]
    SingularPivot { index: usize },

    #[error("source fixed-point iteration did not settle at tau = {tau} (last update {update:e})")]
    FixedPointNonConvergence { tau: f64, update: f64 },

    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, rule: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            rule: rule.into(),
        }
    }

    /// True for errors caused by the input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. } | Error::StrainPole { .. } | Error::Config { .. }
        )
    }
}
