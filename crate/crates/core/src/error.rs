use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not on mass shell (residual {residual:e})")]
    OffShell { residual: f64 },

    #[error("mass-normalized form undefined for m = {mass}")]
    MassNormalizedUndefined { mass: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate component formula (denominator {denominator:e})")]
    DegenerateComponents { denominator: f64 },

    #[error("boost domain violated: {0}")]
    BoostDomain(String),

    #[error("factorization domain violated: {0}")]
    FactorizationDomain(String),

    #[error("no real-branch inversion: {0}")]
    NoRealBranch(String),

    #[error("degenerate limit: {0}")]
    DegenerateLimit(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid too small: need at least {min} points along {axis}, got {got}")]
    GridTooSmall {
        axis: &'static str,
        min: usize,
        got: usize,
    },

    #[error("CFL violated: dt = {dt} > 0.5 dx = {limit}")]
    CflViolated { dt: f64, limit: f64 },

    #[error("non-finite field value at step {step}")]
    NonFinite { step: usize },

    #[error("did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NotConverged {
        iterations: usize,
        best_residual: f64,
    },

    #[error("not classically allowed (r = {r})")]
    NotClassicallyAllowed { r: f64 },

    #[error("light-like mode: omega^2 = k^2 for the {which} wave")]
    LightLike { which: &'static str },

    #[error("config error at line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Numerical failures (divergence, NaN, solver breakdown) as opposed to
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::NotConverged { .. } | Error::CheckFailed(_)
        )
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
