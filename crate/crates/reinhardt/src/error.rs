use thiserror::Error;

use crate::geometry::expr::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside its domain: {0}")]
    Domain(String),

    #[error("quadrature did not converge (estimate {estimate:e}, error estimate {err_est:e})")]
    NoConvergence { estimate: f64, err_est: f64 },

    #[error("exponent profile cannot be evaluated at s = {s}: {reason}")]
    NonEvaluableProfile { s: f64, reason: String },

    #[error("exponent profile takes the value {value} <= 1 at s = {s}")]
    ExponentOutOfRange { s: f64, value: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("index ({m1}, {m2}) lies outside the moment table")]
    IndexOutOfTable { m1: u32, m2: u32 },

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("ray ratio {0} lies on a coordinate axis; use the axis probe")]
    AxisCase(f64),

    #[error("limit extrapolation inconclusive")]
    Inconclusive,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
