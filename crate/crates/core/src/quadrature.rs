//! Riemann and Riemann–Stieltjes integration by panel doubling.
//!
//! Both integrators start from [`INITIAL_PANELS`] uniform panels and double
//! until the Richardson-style estimate `|S_2n - S_n|` meets the tolerance.
//! Sums are accumulated left to right with compensated summation, so results
//! are reproducible bit for bit.

use crate::math::CompensatedSum;
use crate::{Error, RealFunction, Result};

pub const INITIAL_PANELS: usize = 16;

/// Hard upper limit on [`Tolerance::max_panels`].
pub const MAX_PANELS_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// `|S_2n - S_n|` for the final doubling.
    pub error_estimate: f64,
    /// Panel count of the returned sum, `INITIAL_PANELS * 2^k`.
    pub panels: usize,
}

/// Stopping rule: accept when `error_estimate <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    rel: f64,
    abs: f64,
    max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-8,
            abs: 1e-12,
            max_panels: 1 << 22,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_panels: usize) -> Result<Self> {
        if !(rel >= 1e-14 && rel.is_finite()) {
            return Err(Error::InvalidTolerance(
                "relative tolerance must be finite and >= 1e-14",
            ));
        }
        if !(abs >= 1e-300 && abs.is_finite()) {
            return Err(Error::InvalidTolerance(
                "absolute tolerance must be finite and >= 1e-300",
            ));
        }
        if !(2 * INITIAL_PANELS..=MAX_PANELS_LIMIT).contains(&max_panels) {
            return Err(Error::InvalidTolerance("max_panels must lie in [32, 2^24]"));
        }
        Ok(Tolerance { rel, abs, max_panels })
    }

    pub fn rel(&self) -> f64 {
        self.rel
    }

    pub fn abs(&self) -> f64 {
        self.abs
    }

    pub fn max_panels(&self) -> usize {
        self.max_panels
    }

    pub fn with_rel(self, rel: f64) -> Result<Self> {
        Tolerance::new(rel, self.abs, self.max_panels)
    }

    pub fn with_abs(self, abs: f64) -> Result<Self> {
        Tolerance::new(self.rel, abs, self.max_panels)
    }

    pub fn with_max_panels(self, max_panels: usize) -> Result<Self> {
        Tolerance::new(self.rel, self.abs, max_panels)
    }

    /// The bound the error estimate must meet for a given value.
    pub fn bound(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    fn accepts(&self, value: f64, estimate: f64) -> bool {
        estimate <= self.bound(value)
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::Domain {
            context: "integration limit must be finite",
            value: a,
        });
    }
    if !b.is_finite() {
        return Err(Error::Domain {
            context: "integration limit must be finite",
            value: b,
        });
    }
    if a > b {
        return Err(Error::Domain {
            context: "lower limit exceeds upper limit",
            value: a,
        });
    }
    Ok(())
}

// Grid node i of n on [a, b]; the last node is b exactly.
#[inline]
pub(crate) fn node(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i == n {
        b
    } else {
        a + (b - a) * (i as f64 / n as f64)
    }
}

/// `∫_a^b f(t) dt` by composite Simpson with panel doubling.
pub fn riemann_integral(f: &RealFunction, a: f64, b: f64, tol: &Tolerance) -> Result<QuadratureResult> {
    check_interval(a, b)?;
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            panels: INITIAL_PANELS,
        });
    }

    // Simpson on n panels: h/6 * (f(a) + f(b) + 2 * interior nodes + 4 * midpoints).
    // Doubling turns the old midpoints into interior nodes.
    let ends = f.eval(a)? + f.eval(b)?;
    let mut n = INITIAL_PANELS;
    let mut interior = CompensatedSum::default();
    for i in 1..n {
        interior.add(f.eval(node(a, b, i, n))?);
    }
    let mut midpoints = midpoint_sum(f, a, b, n)?;
    let simpson = |n: usize, interior: f64, midpoints: f64| {
        let h = (b - a) / n as f64;
        h / 6.0 * (ends + 2.0 * interior + 4.0 * midpoints)
    };
    let mut prev = simpson(n, interior.value(), midpoints);

    loop {
        if 2 * n > tol.max_panels {
            return Err(Error::ToleranceNotMet {
                value: prev,
                error_estimate: f64::INFINITY,
                panels: n,
            });
        }
        interior.add(midpoints);
        n *= 2;
        midpoints = midpoint_sum(f, a, b, n)?;
        let current = simpson(n, interior.value(), midpoints);
        let estimate = (current - prev).abs();
        if !estimate.is_finite() {
            return Err(Error::NonFiniteSample { at: a });
        }
        if tol.accepts(current, estimate) {
            return Ok(QuadratureResult {
                value: current,
                error_estimate: estimate,
                panels: n,
            });
        }
        if 2 * n > tol.max_panels {
            return Err(Error::ToleranceNotMet {
                value: current,
                error_estimate: estimate,
                panels: n,
            });
        }
        prev = current;
    }
}

fn midpoint_sum(f: &RealFunction, a: f64, b: f64, n: usize) -> Result<f64> {
    let mut s = CompensatedSum::default();
    for i in 0..n {
        s.add(f.eval(node(a, b, 2 * i + 1, 2 * n))?);
    }
    Ok(s.value())
}

/// `∫_a^b f(t) dg(t)` for a continuous, non-decreasing integrator `g`.
///
/// Each panel contributes `f(m_i) * (g(t_{i+1}) - g(t_i))` with `m_i` the panel
/// midpoint. Only increments of `g` are used, never its derivative, so an
/// integrator with an unbounded slope at an endpoint is still handled.
pub fn stieltjes_integral(
    f: &RealFunction,
    g: &RealFunction,
    a: f64,
    b: f64,
    tol: &Tolerance,
) -> Result<QuadratureResult> {
    check_interval(a, b)?;
    let ga = g.eval(a)?;
    let gb = g.eval(b)?;
    let slack = 1e-13 * (ga.abs() + gb.abs() + 1.0);
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            panels: INITIAL_PANELS,
        });
    }

    let mut n = INITIAL_PANELS;
    let mut prev = stieltjes_sum(f, g, a, b, n, ga, gb, slack)?;
    loop {
        if 2 * n > tol.max_panels {
            return Err(Error::ToleranceNotMet {
                value: prev,
                error_estimate: f64::INFINITY,
                panels: n,
            });
        }
        n *= 2;
        let current = stieltjes_sum(f, g, a, b, n, ga, gb, slack)?;
        let estimate = (current - prev).abs();
        if tol.accepts(current, estimate) {
            return Ok(QuadratureResult {
                value: current,
                error_estimate: estimate,
                panels: n,
            });
        }
        if 2 * n > tol.max_panels {
            return Err(Error::ToleranceNotMet {
                value: current,
                error_estimate: estimate,
                panels: n,
            });
        }
        prev = current;
    }
}

#[allow(clippy::too_many_arguments)]
fn stieltjes_sum(
    f: &RealFunction,
    g: &RealFunction,
    a: f64,
    b: f64,
    n: usize,
    ga: f64,
    gb: f64,
    slack: f64,
) -> Result<f64> {
    let mut sum = CompensatedSum::default();
    let mut g_left = ga;
    for i in 0..n {
        let right = node(a, b, i + 1, n);
        let g_right = if i + 1 == n { gb } else { g.eval(right)? };
        let increment = g_right - g_left;
        if increment < -slack {
            return Err(Error::Monotonicity {
                at: right,
                drop: -increment,
            });
        }
        let mid = node(a, b, 2 * i + 1, 2 * n);
        sum.add(f.eval(mid)? * increment);
        g_left = g_right;
    }
    let value = sum.value();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteSample { at: a })
    }
}
