//! User-supplied expressions of one variable `t` and the [`RealFunction`]
//! wrapper that every operator consumes.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := ("-")? power ;
//! power  := atom ("^" factor)? ;
//! atom   := NUMBER | "t" | IDENT "(" expr ("," expr)? ")" | "(" expr ")" ;
//! ```
//!
//! `IDENT` is one of `sin cos exp log sqrt abs pow gamma`; only `pow` takes
//! two arguments. There is no implicit multiplication.

mod function;
mod parse;

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{math, special};

pub use function::{Provenance, RealFunction};
pub use parse::{parse, Expected, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    pub fn apply(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            BinOp::Add => lhs + rhs,
            BinOp::Sub => lhs - rhs,
            BinOp::Mul => lhs * rhs,
            BinOp::Div => lhs / rhs,
            // libm's pow already has 0^0 = 1
            BinOp::Pow => math::pow(lhs, rhs),
        }
    }
}

/// The fixed set of callable functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Pow,
    Gamma,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::Sin,
        Builtin::Cos,
        Builtin::Exp,
        Builtin::Log,
        Builtin::Sqrt,
        Builtin::Abs,
        Builtin::Pow,
        Builtin::Gamma,
    ];

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Exp => "exp",
            Builtin::Log => "log",
            Builtin::Sqrt => "sqrt",
            Builtin::Abs => "abs",
            Builtin::Pow => "pow",
            Builtin::Gamma => "gamma",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Pow => 2,
            _ => 1,
        }
    }

    /// Applies the function; `args` must have length [`Builtin::arity`].
    pub fn apply(self, args: &[f64]) -> f64 {
        let x = args[0];
        match self {
            Builtin::Sin => math::sin(x),
            Builtin::Cos => math::cos(x),
            Builtin::Exp => math::exp(x),
            Builtin::Log => math::ln(x),
            Builtin::Sqrt => math::sqrt(x),
            Builtin::Abs => x.abs(),
            Builtin::Pow => math::pow(x, args[1]),
            Builtin::Gamma => special::gamma(x).unwrap_or(f64::NAN),
        }
    }
}

/// Parsed expression tree. Literals produced by the parser are never negative;
/// a leading minus becomes [`Expr::Neg`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Call { func: Builtin, args: Vec<Expr> },
}

/// A subexpression produced NaN or an infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub subexpression: String,
    pub t: f64,
    pub value: f64,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "`{}` evaluates to {} at t = {}",
            self.subexpression, self.value, self.t
        )
    }
}

impl core::error::Error for EvalError {}

// Binding strength of each node kind, loosest first.
const LEVEL_SUM: u8 = 1;
const LEVEL_TERM: u8 = 2;
const LEVEL_FACTOR: u8 = 3;
const LEVEL_POWER: u8 = 4;
const LEVEL_ATOM: u8 = 5;

impl Expr {
    pub fn num(x: f64) -> Expr {
        Expr::Num(x)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn call(func: Builtin, args: Vec<Expr>) -> Expr {
        Expr::Call { func, args }
    }

    /// Evaluates at `t`. Operands are evaluated left to right and every node
    /// result is checked for finiteness.
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        let value = match self {
            Expr::Num(x) => *x,
            Expr::Var => t,
            Expr::Neg(e) => -e.eval(t)?,
            Expr::Binary { op, lhs, rhs } => {
                let l = lhs.eval(t)?;
                let r = rhs.eval(t)?;
                op.apply(l, r)
            }
            Expr::Call { func, args } => {
                let mut vals = [0.0; 2];
                for (slot, arg) in vals.iter_mut().zip(args) {
                    *slot = arg.eval(t)?;
                }
                func.apply(&vals[..args.len()])
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError {
                subexpression: self.to_string(),
                t,
                value,
            })
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var => 1,
            Expr::Neg(e) => 1 + e.size(),
            Expr::Binary { lhs, rhs, .. } => 1 + lhs.size() + rhs.size(),
            Expr::Call { args, .. } => 1 + args.iter().map(Expr::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var => 1,
            Expr::Neg(e) => 1 + e.depth(),
            Expr::Binary { lhs, rhs, .. } => 1 + lhs.depth().max(rhs.depth()),
            Expr::Call { args, .. } => 1 + args.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    /// Every operator application wrapped in parentheses, no whitespace:
    /// `2*t^3` becomes `(2*(t^3))`.
    pub fn parenthesized(&self) -> String {
        let mut out = String::new();
        self.write_parenthesized(&mut out);
        out
    }

    fn write_parenthesized(&self, out: &mut String) {
        match self {
            Expr::Num(_) | Expr::Var => out.push_str(&self.to_string()),
            Expr::Neg(e) => {
                out.push_str("(-");
                e.write_parenthesized(out);
                out.push(')');
            }
            Expr::Binary { op, lhs, rhs } => {
                out.push('(');
                lhs.write_parenthesized(out);
                out.push(op.symbol());
                rhs.write_parenthesized(out);
                out.push(')');
            }
            Expr::Call { func, args } => {
                out.push_str(func.name());
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    a.write_parenthesized(out);
                }
                out.push(')');
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Num(x) if x.is_sign_negative() => LEVEL_FACTOR,
            Expr::Num(_) | Expr::Var | Expr::Call { .. } => LEVEL_ATOM,
            Expr::Neg(_) => LEVEL_FACTOR,
            Expr::Binary { op, .. } => match op {
                BinOp::Add | BinOp::Sub => LEVEL_SUM,
                BinOp::Mul | BinOp::Div => LEVEL_TERM,
                BinOp::Pow => LEVEL_POWER,
            },
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_at(f, LEVEL_POWER)
            }
            Expr::Binary { op, lhs, rhs } => match op {
                BinOp::Add | BinOp::Sub => {
                    lhs.fmt_at(f, LEVEL_SUM)?;
                    write!(f, " {} ", op.symbol())?;
                    rhs.fmt_at(f, LEVEL_TERM)
                }
                BinOp::Mul | BinOp::Div => {
                    lhs.fmt_at(f, LEVEL_TERM)?;
                    write!(f, " {} ", op.symbol())?;
                    rhs.fmt_at(f, LEVEL_FACTOR)
                }
                BinOp::Pow => {
                    lhs.fmt_at(f, LEVEL_ATOM)?;
                    f.write_str("^")?;
                    rhs.fmt_at(f, LEVEL_FACTOR)
                }
            },
            Expr::Call { func, args } => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.fmt_at(f, LEVEL_SUM)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Minimal-parenthesis rendering that reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl core::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
