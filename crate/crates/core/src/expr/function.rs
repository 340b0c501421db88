use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use super::{parse, Expr, ParseError};
use crate::{Error, Result};

type Evaluator = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

#[derive(Clone)]
enum Source {
    Parsed { text: String, ast: Arc<Expr> },
    Builtin { name: String, eval: Evaluator },
}

/// Where a [`RealFunction`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance<'a> {
    Expression(&'a str),
    Builtin(&'a str),
}

/// A deterministic scalar function of one real variable, optionally paired
/// with an analytic derivative.
///
/// Parsed expressions never carry a derivative; builtins may.
#[derive(Clone)]
pub struct RealFunction {
    source: Source,
    derivative: Option<Evaluator>,
}

impl RealFunction {
    pub fn parse(text: &str) -> core::result::Result<Self, ParseError> {
        let ast = parse(text)?;
        Ok(RealFunction {
            source: Source::Parsed {
                text: text.into(),
                ast: Arc::new(ast),
            },
            derivative: None,
        })
    }

    pub fn from_expr(ast: Expr) -> Self {
        RealFunction {
            source: Source::Parsed {
                text: alloc::format!("{ast}"),
                ast: Arc::new(ast),
            },
            derivative: None,
        }
    }

    /// Wraps a closure. Non-finite results surface as
    /// [`Error::NonFiniteSample`] from [`RealFunction::eval`].
    pub fn new<F>(name: &str, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::try_new(name, move |t| Ok(f(t)))
    }

    pub fn try_new<F>(name: &str, f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        RealFunction {
            source: Source::Builtin {
                name: name.into(),
                eval: Arc::new(f),
            },
            derivative: None,
        }
    }

    pub fn with_derivative<D>(self, d: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.try_with_derivative(move |t| Ok(d(t)))
    }

    pub fn try_with_derivative<D>(mut self, d: D) -> Self
    where
        D: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(d));
        self
    }

    /// `t -> t`, with derivative 1.
    pub fn identity() -> Self {
        RealFunction::new("t", |t| t).with_derivative(|_| 1.0)
    }

    pub fn constant(c: f64) -> Self {
        RealFunction::new("constant", move |_| c).with_derivative(|_| 0.0)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match &self.source {
            Source::Parsed { ast, .. } => ast.eval(t)?,
            Source::Builtin { eval, .. } => eval(t)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample { at: t })
        }
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Analytic derivative at `t`, if one was supplied.
    pub fn derivative(&self, t: f64) -> Option<Result<f64>> {
        self.derivative.as_ref().map(|d| {
            d(t).and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFiniteSample { at: t })
                }
            })
        })
    }

    pub fn provenance(&self) -> Provenance<'_> {
        match &self.source {
            Source::Parsed { text, .. } => Provenance::Expression(text),
            Source::Builtin { name, .. } => Provenance::Builtin(name),
        }
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.source {
            Source::Parsed { ast, .. } => Some(ast),
            Source::Builtin { .. } => None,
        }
    }
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("provenance", &self.provenance())
            .field("derivative", &self.has_derivative())
            .finish()
    }
}

impl core::str::FromStr for RealFunction {
    type Err = ParseError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        RealFunction::parse(s)
    }
}
