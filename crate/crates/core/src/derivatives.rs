//! Pointwise derivatives of one function with respect to another.
//!
//! All three operators are limits of difference quotients
//! `(F(t1) - F(t2)) / (G(t1) - G(t2))` as the two points coalesce:
//!
//! * Stieltjes derivative `df/dg`: `G = g`, the slope of the curve
//!   `(g(t), f(t))` in the `(tau, y)` plane.
//! * Derivative along the path `df/ds`: `G = s`, the arc length of
//!   `tau = g(t)`, i.e. the slope of the fence top edge.
//! * Fractal derivative `df/dt^alpha`: the Stieltjes derivative with
//!   `g(t) = t^alpha`, evaluated by the very same code path.
//!
//! Steps shrink geometrically, `h = h0 / 2^k` with `h0 = max(|t|, 1) * 1e-2`,
//! until two consecutive quotients agree to a relative tolerance.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::quadrature::{self, Tolerance};
use crate::special::Order;
use crate::{math, Error, RealFunction, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_HALVINGS: usize = 40;

const INITIAL_STEP_FACTOR: f64 = 1e-2;
const FLATNESS: f64 = 1e-13;
const SLOPE_STEP_FACTOR: f64 = 1e-6;

/// Point configuration of the difference quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// `t1 = t + h`, `t2 = t - h`.
    Central,
    /// `t1 = t + h`, `t2 = t`; the first-order quotients are combined
    /// pairwise as `2 q(h) - q(2h)` before the convergence test.
    Forward,
    /// `t1 = t`, `t2 = t - h`, extrapolated like [`Stencil::Forward`].
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeResult {
    pub value: f64,
    pub step_used: f64,
    pub converged: bool,
    pub stencil: Stencil,
    /// `(step, estimate)` pairs in the order they were computed. For the
    /// one-sided stencils the estimates are the extrapolated values.
    pub sequence: Vec<(f64, f64)>,
}

/// Closed interval on which the functions may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const ALL: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Domain {
                context: "derivative domain must be a non-empty interval",
                value: hi - lo,
            });
        }
        Ok(Domain { lo, hi })
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(
            "derivative tolerance must be positive and finite",
        ))
    }
}

fn choose_stencil(t: f64, domain: Domain) -> (Stencil, f64) {
    let h0 = t.abs().max(1.0) * INITIAL_STEP_FACTOR;
    let below = t - domain.lo;
    let above = domain.hi - t;
    if below >= h0 && above >= h0 {
        (Stencil::Central, h0)
    } else if above >= 2.0 * h0 {
        (Stencil::Forward, h0)
    } else if below >= 2.0 * h0 {
        (Stencil::Backward, h0)
    } else if above >= below {
        (Stencil::Forward, above / 2.0)
    } else {
        (Stencil::Backward, below / 2.0)
    }
}

fn points(stencil: Stencil, t: f64, h: f64) -> (f64, f64) {
    match stencil {
        Stencil::Central => (t + h, t - h),
        Stencil::Forward => (t + h, t),
        Stencil::Backward => (t, t - h),
    }
}

/// Limit of `num(t1, t2) / den(t1, t2)` over the shrinking step sequence,
/// where `num` and `den` return increments `F(t1) - F(t2)`.
///
/// Converged once two consecutive estimates agree to `tol * max(|estimate|, 1)`.
fn quotient_limit<N, D>(
    t: f64,
    domain: Domain,
    tol: f64,
    den_scale: f64,
    mut num: N,
    mut den: D,
) -> Result<DerivativeResult>
where
    N: FnMut(f64, f64) -> Result<f64>,
    D: FnMut(f64, f64) -> Result<f64>,
{
    check_tol(tol)?;
    if !t.is_finite() || !domain.contains(t) {
        return Err(Error::Domain {
            context: "derivative point outside the admissible domain",
            value: t,
        });
    }
    let (stencil, h0) = choose_stencil(t, domain);
    let threshold = FLATNESS * den_scale;
    let mut sequence: Vec<(f64, f64)> = Vec::new();
    let mut any_regular = false;
    let mut previous_raw: Option<f64> = None;
    let mut h = h0;
    for _ in 0..=MAX_HALVINGS {
        let (t1, t2) = points(stencil, t, h);
        let d = den(t1, t2)?;
        if d.abs() < threshold {
            previous_raw = None;
            h *= 0.5;
            continue;
        }
        any_regular = true;
        let raw = num(t1, t2)? / d;
        if !raw.is_finite() {
            return Err(Error::NonFiniteSample { at: t });
        }
        let estimate = match stencil {
            Stencil::Central => Some(raw),
            Stencil::Forward | Stencil::Backward => previous_raw.map(|coarse| 2.0 * raw - coarse),
        };
        previous_raw = Some(raw);
        if let Some(estimate) = estimate {
            let prev = sequence.last().map(|&(_, e)| e);
            sequence.push((h, estimate));
            if let Some(prev) = prev {
                if (estimate - prev).abs() <= tol * estimate.abs().max(1.0) {
                    return Ok(DerivativeResult {
                        value: estimate,
                        step_used: h,
                        converged: true,
                        stencil,
                        sequence,
                    });
                }
            }
        }
        h *= 0.5;
    }
    match sequence.last() {
        Some(&(step, value)) => Err(Error::NotConverged(Box::new(DerivativeResult {
            value,
            step_used: step,
            converged: false,
            stencil,
            sequence,
        }))),
        None if any_regular => Err(Error::NotConverged(Box::new(DerivativeResult {
            value: f64::NAN,
            step_used: h,
            converged: false,
            stencil,
            sequence,
        }))),
        None => Err(Error::DegenerateDenominator { t }),
    }
}

/// `df/dg` at `t`, evaluating `f` and `g` anywhere on the real line.
pub fn stieltjes_derivative(f: &RealFunction, g: &RealFunction, t: f64, tol: f64) -> Result<DerivativeResult> {
    stieltjes_derivative_within(f, g, t, Domain::ALL, tol)
}

/// `df/dg` at `t`, sampling only inside `domain`; near an end of the domain
/// a one-sided stencil is used.
pub fn stieltjes_derivative_within(
    f: &RealFunction,
    g: &RealFunction,
    t: f64,
    domain: Domain,
    tol: f64,
) -> Result<DerivativeResult> {
    let scale = if domain.contains(t) {
        g.eval(t)?.abs() + 1.0
    } else {
        1.0
    };
    quotient_limit(
        t,
        domain,
        tol,
        scale,
        |t1, t2| Ok(f.eval(t1)? - f.eval(t2)?),
        |t1, t2| Ok(g.eval(t1)? - g.eval(t2)?),
    )
}

/// Ordinary `df/dt`: the Stieltjes derivative against the identity.
pub fn classical_derivative(f: &RealFunction, t: f64, tol: f64) -> Result<DerivativeResult> {
    classical_derivative_within(f, t, Domain::ALL, tol)
}

pub fn classical_derivative_within(f: &RealFunction, t: f64, domain: Domain, tol: f64) -> Result<DerivativeResult> {
    stieltjes_derivative_within(f, &RealFunction::identity(), t, domain, tol)
}

/// `t -> t^alpha`, the integrator of the fractal derivative.
pub fn power_path(alpha: Order) -> RealFunction {
    let a = alpha.get();
    RealFunction::new("t^alpha", move |t| math::pow(t, a)).with_derivative(move |t| a * math::pow(t, a - 1.0))
}

/// `df/dt^alpha`, computed as [`stieltjes_derivative_within`] with
/// `g = power_path(alpha)` on `[0, inf)`.
pub fn fractal_derivative(f: &RealFunction, alpha: Order, t: f64, tol: f64) -> Result<DerivativeResult> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain {
            context: "fractal derivative requires t >= 0",
            value: t,
        });
    }
    if t == 0.0 && alpha.get() < 1.0 {
        return Err(Error::Domain {
            context: "fractal derivative at t = 0 is undefined for alpha < 1",
            value: t,
        });
    }
    let domain = Domain {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    stieltjes_derivative_within(f, &power_path(alpha), t, domain, tol)
}

/// Quadrature settings used for arc-length increments.
pub fn arc_tolerance() -> Tolerance {
    // constant arguments, cannot fail
    Tolerance::new(1e-10, 1e-300, 1 << 18).unwrap_or_default()
}

/// Cumulative arc length `s(t)` of the plane curve `tau = g(t)` from `base`.
#[derive(Debug, Clone)]
pub struct PathLength {
    g: RealFunction,
    base: f64,
    domain: Domain,
    tol: Tolerance,
}

impl PathLength {
    pub fn new(g: RealFunction, base: f64, tol: Tolerance) -> Result<Self> {
        let domain = Domain::new(base, f64::INFINITY)?;
        Ok(PathLength { g, base, domain, tol })
    }

    /// Restricts where `g` may be sampled when differentiating it numerically.
    pub fn within(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// `|g'(u)|`-based speed `sqrt(1 + g'(u)^2)`.
    pub fn speed(&self, u: f64) -> Result<f64> {
        let slope = curve_slope(&self.g, u, self.domain)?;
        Ok(math::sqrt(1.0 + slope * slope))
    }

    /// `s(t) = ∫_base^t sqrt(1 + g'(u)^2) du`.
    pub fn at(&self, t: f64) -> Result<f64> {
        if t < self.base {
            return Err(Error::Domain {
                context: "arc length is measured forward from its base point",
                value: t,
            });
        }
        self.between(self.base, t)
    }

    /// `s(t1) - s(t0)`, integrated directly over `[t0, t1]` (either order).
    pub fn between(&self, t0: f64, t1: f64) -> Result<f64> {
        let (lo, hi, sign) = if t0 <= t1 { (t0, t1, 1.0) } else { (t1, t0, -1.0) };
        let path = self.clone();
        let integrand = RealFunction::try_new("arc_speed", move |u| path.speed(u));
        Ok(sign * quadrature::riemann_integral(&integrand, lo, hi, &self.tol)?.value)
    }
}

/// `g'(u)`: analytic if available, else central differences with step
/// `max(|u|, 1) * 1e-6` (one-sided, second order, at the edge of `domain`).
pub fn curve_slope(g: &RealFunction, u: f64, domain: Domain) -> Result<f64> {
    if let Some(d) = g.derivative(u) {
        return d;
    }
    let h = u.abs().max(1.0) * SLOPE_STEP_FACTOR;
    if u - h >= domain.lo && u + h <= domain.hi {
        Ok((g.eval(u + h)? - g.eval(u - h)?) / (2.0 * h))
    } else if u + 2.0 * h <= domain.hi {
        Ok((-3.0 * g.eval(u)? + 4.0 * g.eval(u + h)? - g.eval(u + 2.0 * h)?) / (2.0 * h))
    } else {
        Ok((3.0 * g.eval(u)? - 4.0 * g.eval(u - h)? + g.eval(u - 2.0 * h)?) / (2.0 * h))
    }
}

/// Length of `tau = g(u)` for `a <= u <= t`.
pub fn arc_length(g: &RealFunction, a: f64, t: f64, tol: &Tolerance) -> Result<f64> {
    PathLength::new(g.clone(), a, *tol)?.at(t)
}

/// `df/ds` at `t`, where `s` is the arc length of `tau = g(t)` measured from `a`.
pub fn path_derivative(f: &RealFunction, g: &RealFunction, a: f64, t: f64, tol: f64) -> Result<DerivativeResult> {
    let domain = Domain::new(a, f64::INFINITY)?;
    path_derivative_within(f, g, a, t, domain, tol)
}

pub fn path_derivative_within(
    f: &RealFunction,
    g: &RealFunction,
    a: f64,
    t: f64,
    domain: Domain,
    tol: f64,
) -> Result<DerivativeResult> {
    if t.is_nan() || t < a {
        return Err(Error::Domain {
            context: "path derivative requires t >= a",
            value: t,
        });
    }
    let path = PathLength::new(g.clone(), a, arc_tolerance())?.within(domain);
    let scale = path.at(t)?.abs() + 1.0;
    quotient_limit(
        t,
        domain,
        tol,
        scale,
        |t1, t2| Ok(f.eval(t1)? - f.eval(t2)?),
        |t1, t2| path.between(t2, t1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> RealFunction {
        RealFunction::parse(s).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn stieltjes_examples() {
        let d = stieltjes_derivative(&parse("t^2"), &parse("t"), 3.0, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, 6.0) < 1e-8);
        assert!(d.converged);
        assert_eq!(d.step_used, d.sequence.last().unwrap().0);
        assert_eq!(d.value, d.sequence.last().unwrap().1);

        let d = stieltjes_derivative(&parse("sin(t)"), &parse("t^2"), 1.0, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, 0.270_151_152_934_069_9) < 1e-8, "{}", d.value);

        let g = parse("exp(t) + t");
        let d = stieltjes_derivative(&g, &g, 1.0, DEFAULT_TOL).unwrap();
        assert_eq!(d.value, 1.0);
    }

    #[test]
    fn flat_integrator_is_degenerate() {
        let err = stieltjes_derivative(&parse("t"), &parse("0*t + 2"), 1.0, DEFAULT_TOL).unwrap_err();
        assert_eq!(err, Error::DegenerateDenominator { t: 1.0 });
    }

    #[test]
    fn non_convergence_returns_sequence() {
        // t against t^3 at 0: quotients grow like 1/h^2
        let err = stieltjes_derivative(&parse("t"), &parse("t^3"), 0.0, DEFAULT_TOL).unwrap_err();
        match err {
            Error::NotConverged(r) => {
                assert!(!r.converged);
                assert!(r.sequence.len() >= 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_tolerance() {
        assert!(matches!(
            stieltjes_derivative(&parse("t"), &parse("t"), 1.0, 0.0),
            Err(Error::InvalidTolerance(_))
        ));
    }

    #[test]
    fn one_sided_near_domain_ends() {
        let domain = Domain::new(0.0, 1.0).unwrap();
        let d = stieltjes_derivative_within(&parse("t"), &parse("t^2"), 1.0, domain, DEFAULT_TOL).unwrap();
        assert_eq!(d.stencil, Stencil::Backward);
        assert!(rel(d.value, 0.5) < 1e-7);
        let d = stieltjes_derivative_within(&parse("t^3 + t"), &parse("t"), 0.0, domain, DEFAULT_TOL).unwrap();
        assert_eq!(d.stencil, Stencil::Forward);
        assert!((d.value - 1.0).abs() < 1e-7);
        // zero derivative: the absolute floor of the stopping rule applies
        let d = stieltjes_derivative(&parse("t^3 - 3*t"), &parse("t"), 1.0, DEFAULT_TOL).unwrap();
        assert!(d.value.abs() < 1e-7);
        let tiny = Domain::new(0.0, 1e-3).unwrap();
        let d = stieltjes_derivative_within(&parse("exp(t)"), &parse("t"), 4e-4, tiny, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, 4e-4f64.exp()) < 1e-7);
    }

    #[test]
    fn arc_length_examples() {
        let tol = Tolerance::new(1e-12, 1e-15, 1 << 20).unwrap();
        assert!(rel(arc_length(&parse("0*t"), 0.0, 5.0, &tol).unwrap(), 5.0) < 1e-15);
        assert!(rel(arc_length(&parse("t"), 0.0, 1.0, &tol).unwrap(), 2f64.sqrt()) < 1e-9);
        // (2 sqrt 5 + asinh 2) / 4
        let s = arc_length(&parse("t^2"), 0.0, 1.0, &tol).unwrap();
        assert!(rel(s, 1.478_942_857_544_597_4) < 1e-9, "{s}");
        assert!(arc_length(&parse("t"), 1.0, 0.5, &tol).is_err());
    }

    #[test]
    fn path_length_invariants() {
        let g = parse("sin(3*t)");
        let path = PathLength::new(g.clone(), 0.0, arc_tolerance()).unwrap();
        assert_eq!(path.at(0.0).unwrap(), 0.0);
        let mut prev = 0.0;
        for i in 1..=20 {
            let t = i as f64 * 0.1;
            let s = path.at(t).unwrap();
            assert!(s >= prev);
            assert!(s >= t - 1e-12);
            assert!(s >= (g.eval(t).unwrap() - g.eval(0.0).unwrap()).abs() - 1e-12);
            prev = s;
        }
    }

    #[test]
    fn path_examples() {
        let d = path_derivative(&parse("t"), &parse("t"), 0.0, 0.8, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, core::f64::consts::FRAC_1_SQRT_2) < 1e-8);
        let d = path_derivative(&parse("t"), &parse("0*t"), 0.0, 2.0, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, 1.0) < 1e-9);
        let d = path_derivative(&parse("3"), &parse("t^2"), 0.0, 1.5, DEFAULT_TOL).unwrap();
        assert_eq!(d.value, 0.0);
        // at the base point the stencil is one-sided
        let d = path_derivative(&parse("t"), &parse("t"), 0.0, 0.0, DEFAULT_TOL).unwrap();
        assert_eq!(d.stencil, Stencil::Forward);
        assert!(path_derivative(&parse("t"), &parse("t"), 1.0, 0.5, DEFAULT_TOL).is_err());
    }

    #[test]
    fn fractal_examples() {
        let half = Order::new(0.5).unwrap();
        let d = fractal_derivative(&parse("t^0.5"), half, 4.0, DEFAULT_TOL).unwrap();
        assert_eq!(d.value, 1.0);
        let d = fractal_derivative(&parse("t"), Order::new(1.0).unwrap(), 7.0, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, 1.0) < 1e-12);
        let d = fractal_derivative(&parse("t"), half, 4.0, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, 4.0) < 1e-8, "{}", d.value);
    }

    #[test]
    fn fractal_domain() {
        let half = Order::new(0.5).unwrap();
        assert!(fractal_derivative(&parse("t"), half, 0.0, DEFAULT_TOL).is_err());
        assert!(fractal_derivative(&parse("t"), half, -1.0, DEFAULT_TOL).is_err());
        // alpha >= 1 at the origin: forward stencil, even though g'(0) = 0
        let d = fractal_derivative(&parse("t^2"), Order::new(2.0).unwrap(), 0.0, DEFAULT_TOL).unwrap();
        assert_eq!(d.stencil, Stencil::Forward);
        assert!(rel(d.value, 1.0) < 1e-12);
        let d = fractal_derivative(&parse("t^3"), Order::new(2.0).unwrap(), 0.0, DEFAULT_TOL).unwrap();
        assert!(d.value.abs() < 1e-7);
    }

    #[test]
    fn fractal_against_brute_force_quotients() {
        // (f(t1) - f(t)) / (t1^a - t^a) with t1 -> t, evaluated directly
        let (a, t) = (0.5f64, 4.0f64);
        let mut last = 0.0;
        for k in 10..20 {
            let t1 = t + 2f64.powi(-k);
            last = (t1 - t) / (t1.powf(a) - t.powf(a));
        }
        assert!(rel(last, 4.0) < 1e-5);
        let d = fractal_derivative(&parse("t"), Order::new(a).unwrap(), t, DEFAULT_TOL).unwrap();
        assert!(rel(d.value, last) < 1e-5);
    }
}
