//! Riemann–Liouville fractional integral
//! `I^alpha f(t) = (1 / gamma(alpha)) ∫_a^t (t - tau)^(alpha - 1) f(tau) dtau`,
//! computed along two independent routes:
//!
//! * [`rl_integral_stieltjes`] integrates `f` against the increments of the
//!   self-scaling curve `g_t`, i.e. the area of the `(tau, y)` shadow of a fence
//!   erected along `g_t`. The partition is graded towards `tau = t`, where
//!   `g_t` is steepest.
//! * [`rl_integral_kernel`] substitutes `u = (t - tau)^alpha`, which turns the
//!   weakly singular kernel into the constant `1 / gamma(alpha + 1)`, and runs
//!   an ordinary Riemann quadrature in `u`.
//!
//! Their agreement is a cross-check; [`power_rule_oracle`] supplies closed
//! forms for monomials.

use alloc::vec::Vec;

use crate::quadrature::{self, QuadratureResult, Tolerance};
use crate::special::{gamma, Order, ScalingCurve};
use crate::{math, Error, RealFunction, Result};

/// Order, lower terminal `a`, evaluation point `t > a`, and integrand.
#[derive(Debug, Clone)]
pub struct FractionalIntegralSpec {
    alpha: Order,
    a: f64,
    t: f64,
    f: RealFunction,
}

impl FractionalIntegralSpec {
    pub fn new(alpha: Order, a: f64, t: f64, f: RealFunction) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::Domain {
                context: "lower terminal must be finite",
                value: a,
            });
        }
        if !(t.is_finite() && t > a) {
            return Err(Error::Domain {
                context: "evaluation point must be finite and exceed the lower terminal",
                value: t,
            });
        }
        Ok(FractionalIntegralSpec { alpha, a, t, f })
    }

    pub fn alpha(&self) -> Order {
        self.alpha
    }

    pub fn lower(&self) -> f64 {
        self.a
    }

    pub fn point(&self) -> f64 {
        self.t
    }

    pub fn integrand(&self) -> &RealFunction {
        &self.f
    }
}

/// The integrator `tau -> g_{t-a}(tau - a)` on `[a, t]`, with its analytic
/// derivative attached.
pub fn shifted_scaling_curve(alpha: Order, a: f64, t: f64) -> Result<RealFunction> {
    let curve = ScalingCurve::new(alpha, t - a)?;
    Ok(RealFunction::try_new("scaling_curve", move |tau| curve.value(tau - a))
        .try_with_derivative(move |tau| curve.derivative(tau - a)))
}

/// `I^alpha f(t)` as the Stieltjes integral `∫_a^t f(tau) d g_{t-a}(tau - a)`.
///
/// The integral is taken over the parameter `s` in `[0, 1]` with
/// `tau = t - (t - a) (1 - s)^2`, which leaves a Stieltjes integral unchanged
/// but shrinks the panels next to `t` quadratically. Without it the error near
/// the singular end decays only like `h^(1 + alpha)`.
pub fn rl_integral_stieltjes(spec: &FractionalIntegralSpec, tol: &Tolerance) -> Result<QuadratureResult> {
    let alpha = spec.alpha.get();
    let (a, t) = (spec.a, spec.t);
    let span = t - a;
    let height = math::pow(span, alpha) / gamma(alpha + 1.0)?;
    let f = spec.f.clone();
    let f_graded = RealFunction::try_new("rl_integrand", move |s| {
        let r = 1.0 - s;
        f.eval((t - span * r * r).max(a))
    });
    // g_{t-a}(tau - a) = height * (1 - (1 - s)^(2 alpha)), without cancellation
    let g_graded = RealFunction::new("scaling_curve", move |s| {
        -height * math::expm1(2.0 * alpha * math::ln_1p(-s))
    });
    quadrature::stieltjes_integral(&f_graded, &g_graded, 0.0, 1.0, tol)
}

/// `I^alpha f(t)` from the kernel form after substituting `u = (t - tau)^alpha`:
/// `(1 / gamma(alpha + 1)) ∫_0^{(t-a)^alpha} f(t - u^(1/alpha)) du`.
pub fn rl_integral_kernel(spec: &FractionalIntegralSpec, tol: &Tolerance) -> Result<QuadratureResult> {
    let alpha = spec.alpha.get();
    let (a, t) = (spec.a, spec.t);
    let upper = math::pow(t - a, alpha);
    let inv_alpha = 1.0 / alpha;
    let f = spec.f.clone();
    let integrand = RealFunction::try_new("rl_kernel", move |u| {
        // rounding can push t - u^(1/alpha) just below a
        let tau = (t - math::pow(u, inv_alpha)).max(a);
        f.eval(tau)
    });
    let norm = gamma(alpha + 1.0)?;
    // The quadrature's own bound is scaled by 1/norm as well, so the
    // relative stopping rule is unaffected.
    let r = quadrature::riemann_integral(&integrand, 0.0, upper, tol)?;
    Ok(QuadratureResult {
        value: r.value / norm,
        error_estimate: r.error_estimate / norm,
        panels: r.panels,
    })
}

/// `I^alpha t^p = gamma(p + 1) / gamma(p + 1 + alpha) * t^(p + alpha)` (lower terminal 0).
pub fn power_rule_oracle(p: f64, alpha: Order, t: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(Error::Domain {
            context: "power must be finite and non-negative",
            value: p,
        });
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain {
            context: "evaluation point must be positive",
            value: t,
        });
    }
    let alpha = alpha.get();
    Ok(gamma(p + 1.0)? / gamma(p + 1.0 + alpha)? * math::pow(t, p + alpha))
}

/// Piecewise-cubic interpolant of samples on a uniform grid.
///
/// Each cell `[x_j, x_{j+1}]` uses the Lagrange cubic through the four
/// nearest nodes `x_{j-1} .. x_{j+2}`, shifted inward at the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicGrid {
    start: f64,
    end: f64,
    values: Vec<f64>,
}

impl CubicGrid {
    pub fn new(start: f64, end: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 {
            return Err(Error::Domain {
                context: "cubic interpolation needs at least four nodes",
                value: values.len() as f64,
            });
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::Domain {
                context: "interpolation grid must be a finite, non-empty interval",
                value: end - start,
            });
        }
        Ok(CubicGrid { start, end, values })
    }

    /// Samples `f` at `points` equally spaced nodes on `[start, end]`.
    pub fn sample<F>(start: f64, end: f64, points: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let cells = points.saturating_sub(1).max(1);
        let values = (0..points)
            .map(|i| f(quadrature::node(start, end, i, cells)))
            .collect::<Result<Vec<_>>>()?;
        CubicGrid::new(start, end, values)
    }

    pub fn nodes(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let cells = self.values.len() - 1;
        let h = (self.end - self.start) / cells as f64;
        let slack = 1e-12 * (self.end - self.start);
        if !(x >= self.start - slack && x <= self.end + slack) {
            return Err(Error::Domain {
                context: "interpolant evaluated outside its grid",
                value: x,
            });
        }
        let s = (x - self.start) / h;
        let cell = (math::floor(s).max(0.0) as usize).min(cells - 1);
        let first = cell.saturating_sub(1).min(cells - 3);
        let u = s - first as f64;
        // Lagrange basis on nodes 0, 1, 2, 3 in the local coordinate u.
        let y = &self.values[first..first + 4];
        let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
        let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
        let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
        let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
        Ok(y[0] * l0 + y[1] * l1 + y[2] * l2 + y[3] * l3)
    }

    pub fn into_function(self) -> RealFunction {
        RealFunction::try_new("cubic_grid", move |x| self.eval(x))
    }
}
