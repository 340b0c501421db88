use alloc::boxed::Box;
use core::fmt;

use crate::derivatives::DerivativeResult;
use crate::expr::{EvalError, ParseError};

/// Every failure the numerical core can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the operator's domain.
    Domain {
        context: &'static str,
        value: f64,
    },
    /// `gamma` would overflow `f64`.
    Overflow {
        x: f64,
    },
    Parse(ParseError),
    Eval(EvalError),
    /// A function returned NaN or an infinity at `at`.
    NonFiniteSample {
        at: f64,
    },
    /// Panel doubling hit `max_panels`; carries the best available estimate.
    ToleranceNotMet {
        value: f64,
        error_estimate: f64,
        panels: usize,
    },
    /// The integrator decreased between two consecutive sample points.
    Monotonicity {
        at: f64,
        drop: f64,
    },
    /// `|g(t1) - g(t2)|` stayed below the flatness threshold at every step.
    DegenerateDenominator {
        t: f64,
    },
    /// The difference quotients never settled; the diagnostic sequence is attached.
    NotConverged(Box<DerivativeResult>),
    InvalidTolerance(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { context, value } => write!(f, "domain error: {context} (got {value})"),
            Error::Overflow { x } => write!(f, "gamma({x}) overflows double precision"),
            Error::Parse(e) => write!(f, "{e}"),
            Error::Eval(e) => write!(f, "{e}"),
            Error::NonFiniteSample { at } => write!(f, "non-finite function value at t = {at}"),
            Error::ToleranceNotMet {
                value,
                error_estimate,
                panels,
            } => write!(
                f,
                "tolerance not met after {panels} panels: value {value}, error estimate {error_estimate}"
            ),
            Error::Monotonicity { at, drop } => {
                write!(f, "integrator is not monotone: decreases by {drop} at t = {at}")
            }
            Error::DegenerateDenominator { t } => {
                write!(f, "denominator vanishes at every step near t = {t}")
            }
            Error::NotConverged(r) => write!(
                f,
                "difference quotients did not converge ({} steps, last estimate {})",
                r.sequence.len(),
                r.value
            ),
            Error::InvalidTolerance(msg) => write!(f, "invalid tolerance: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

impl From<EvalError> for Error {
    fn from(e: EvalError) -> Self {
        Error::Eval(e)
    }
}
