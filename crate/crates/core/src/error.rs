use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("delay {tau} is not an integer multiple of the step {dt}")]
    NonCommensurateDelay { tau: f64, dt: f64 },

    #[error("invalid step size {0} (must be finite and > 0)")]
    InvalidStep(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("variant `{variant}` requires parameter `{param}`")]
    MissingParameter {
        variant: &'static str,
        param: &'static str,
    },

    #[error("unknown system variant `{0}`")]
    UnknownVariant(String),

    #[error("trajectory diverged at step {step}{} (|u| = {value:e})", trial.map(|t| format!(" of trial {t}")).unwrap_or_default())]
    Diverged {
        step: usize,
        value: f64,
        trial: Option<usize>,
    },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("feedback gain is zero; the expansion is degenerate")]
    DegenerateGain,

    #[error("linear gain {target} is outside the attainable range of the sigmoid map")]
    Unreachable { target: f64 },

    #[error("quadrature resolution {got} is below the minimum of {min} intervals")]
    ResolutionTooCoarse { got: usize, min: usize },

    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("amplitude window spans {got} time units, needs at least {needed}")]
    WindowTooShort { got: f64, needed: f64 },

    #[error("no oscillation onset inside the scanned range")]
    NoOnsetInRange,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Attach a trial index to a divergence error.
    pub fn in_trial(self, index: usize) -> Self {
        match self {
            Error::Diverged { step, value, .. } => Error::Diverged {
                step,
                value,
                trial: Some(index),
            },
            other => other,
        }
    }
}
