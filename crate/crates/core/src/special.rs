//! Gamma function and the self-scaling curve
//! `g_t(tau) = (t^alpha - (t - tau)^alpha) / gamma(alpha + 1)`.

use core::f64::consts::PI;

use crate::math;
use crate::{Error, Result};

/// Largest argument accepted by [`gamma`]; `gamma(171.7)` already overflows.
pub const GAMMA_MAX_ARG: f64 = 170.0;

/// Below this ratio `tau / t` the curve switches to its first-order expansion.
const SMALL_RATIO: f64 = 1e-8;

/// Positive, finite order of a fractional integral or fractal derivative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Order(alpha))
        } else {
            Err(Error::Domain {
                context: "order alpha must be positive and finite",
                value: alpha,
            })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Order::new(alpha)
    }
}

// g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on `(0, 170]`.
///
/// Integers are returned as exact-as-possible factorial products; everything
/// else goes through a Lanczos sum, with `gamma(x) = gamma(x + 1) / x` below
/// one half.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain {
            context: "gamma requires a positive finite argument",
            value: x,
        });
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow { x });
    }
    let value = if x == math::floor(x) {
        factorial(x as u32 - 1)
    } else if x < 0.5 {
        lanczos(x + 1.0) / x
    } else {
        lanczos(x)
    };
    Ok(fault::apply(value))
}

fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z + 1/2) is split in two halves so that large arguments do not
    // overflow before exp(-t) brings the product back into range.
    let half = math::pow(t, 0.5 * (z + 0.5));
    math::sqrt(2.0 * PI) * half * (half * math::exp(-t)) * sum
}

/// The curve `tau -> g_t(tau)` for a fixed order and anchor `t`, with the
/// normalisation `gamma(alpha + 1)` computed once.
#[derive(Debug, Clone, Copy)]
pub struct ScalingCurve {
    alpha: f64,
    t: f64,
    t_pow: f64,
    // gamma(alpha + 1) and gamma(alpha)
    norm: f64,
    norm_derivative: f64,
}

impl ScalingCurve {
    pub fn new(alpha: Order, t: f64) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Domain {
                context: "scaling curve anchor t must be positive",
                value: t,
            });
        }
        let a = alpha.get();
        Ok(ScalingCurve {
            alpha: a,
            t,
            t_pow: math::pow(t, a),
            norm: gamma(a + 1.0)?,
            norm_derivative: gamma(a)?,
        })
    }

    pub fn anchor(&self) -> f64 {
        self.t
    }

    pub fn order(&self) -> f64 {
        self.alpha
    }

    /// `g_t(tau)` for `tau` in `[0, t]`.
    pub fn value(&self, tau: f64) -> Result<f64> {
        if !(0.0..=self.t).contains(&tau) {
            return Err(Error::Domain {
                context: "scaling curve requires 0 <= tau <= t",
                value: tau,
            });
        }
        if tau < SMALL_RATIO * self.t {
            // t^a - (t - tau)^a ~ a t^(a-1) tau
            return Ok(self.alpha * math::pow(self.t, self.alpha - 1.0) * tau / self.norm);
        }
        Ok((self.t_pow - math::pow(self.t - tau, self.alpha)) / self.norm)
    }

    /// `d g_t / d tau = (t - tau)^(alpha - 1) / gamma(alpha)` on `[0, t)`.
    pub fn derivative(&self, tau: f64) -> Result<f64> {
        if !(0.0..self.t).contains(&tau) {
            return Err(Error::Domain {
                context: "scaling curve derivative requires 0 <= tau < t",
                value: tau,
            });
        }
        Ok(math::pow(self.t - tau, self.alpha - 1.0) / self.norm_derivative)
    }
}

/// `g_t(tau) = (t^alpha - (t - tau)^alpha) / gamma(alpha + 1)`.
pub fn scaling_curve(alpha: Order, t: f64, tau: f64) -> Result<f64> {
    ScalingCurve::new(alpha, t)?.value(tau)
}

/// `(t - tau)^(alpha - 1) / gamma(alpha)`, the tau-derivative of [`scaling_curve`].
pub fn scaling_curve_derivative(alpha: Order, t: f64, tau: f64) -> Result<f64> {
    ScalingCurve::new(alpha, t)?.derivative(tau)
}

#[cfg(feature = "fault-injection")]
pub mod fault {
    //! Process-wide relative perturbation of [`gamma`](super::gamma).
    use core::sync::atomic::{AtomicU64, Ordering};

    static PERTURBATION: AtomicU64 = AtomicU64::new(0);

    /// Every subsequent `gamma` result is multiplied by `1 + eps`.
    pub fn set_gamma_perturbation(eps: f64) {
        PERTURBATION.store(eps.to_bits(), Ordering::SeqCst);
    }

    pub(crate) fn apply(value: f64) -> f64 {
        let eps = f64::from_bits(PERTURBATION.load(Ordering::SeqCst));
        if eps == 0.0 {
            value
        } else {
            value * (1.0 + eps)
        }
    }
}

#[cfg(not(feature = "fault-injection"))]
mod fault {
    #[inline(always)]
    pub(crate) fn apply(value: f64) -> f64 {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn order(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(0.5).unwrap(), 1.772_453_850_905_516) < 1e-15);
    }

    #[test]
    fn gamma_rejects_bad_arguments() {
        for x in [0.0, -1.0, -0.5, f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
            assert!(matches!(gamma(x), Err(Error::Domain { .. })), "{x}");
        }
        assert!(matches!(gamma(170.5), Err(Error::Overflow { .. })));
        assert!(gamma(170.0).unwrap().is_finite());
    }

    #[test]
    fn gamma_half_integers() {
        // (2n)! sqrt(pi) / (4^n n!)
        for n in 0..=10u32 {
            let num = (1..=2 * n).fold(1.0, |a, k| a * k as f64);
            let den = 4f64.powi(n as i32) * (1..=n).fold(1.0, |a, k| a * k as f64);
            let expected = num * PI.sqrt() / den;
            let got = gamma(0.5 + n as f64).unwrap();
            assert!(rel(got, expected) < 1e-12, "n={n}: {got} vs {expected}");
        }
    }

    #[test]
    fn order_validation() {
        assert!(Order::new(0.5).is_ok());
        for a in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(Order::new(a).is_err());
        }
    }

    #[test]
    fn scaling_curve_examples() {
        assert!((scaling_curve(order(1.0), 2.0, 0.7).unwrap() - 0.7).abs() < 1e-15);
        let expected = 1.0 / gamma(1.5).unwrap();
        assert!(rel(scaling_curve(order(0.5), 1.0, 1.0).unwrap(), expected) < 1e-15);
        assert!(rel(expected, core::f64::consts::FRAC_2_SQRT_PI) < 1e-15);
        assert_eq!(scaling_curve(order(2.0), 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn scaling_curve_domain() {
        assert!(scaling_curve(order(0.5), 1.0, -0.1).is_err());
        assert!(scaling_curve(order(0.5), 1.0, 1.1).is_err());
        assert!(scaling_curve(order(0.5), 0.0, 0.0).is_err());
        assert!(scaling_curve_derivative(order(0.5), 1.0, 1.0).is_err());
        assert!(scaling_curve_derivative(order(0.5), 1.0, -1e-3).is_err());
    }

    #[test]
    fn scaling_curve_derivative_examples() {
        assert_eq!(scaling_curve_derivative(order(1.0), 2.0, 1.3).unwrap(), 1.0);
        let d = scaling_curve_derivative(order(0.5), 1.0, 0.0).unwrap();
        assert!(rel(d, 0.564_189_583_547_756_3) < 1e-14);
        assert!(rel(scaling_curve_derivative(order(2.0), 1.0, 0.5).unwrap(), 0.5) < 1e-15);
    }

    #[test]
    fn scaling_curve_is_strictly_increasing_and_hits_endpoint() {
        for a in [0.25, 0.5, 1.0, 1.5, 2.0] {
            for t in [0.3, 1.0, 2.5] {
                let curve = ScalingCurve::new(order(a), t).unwrap();
                let n = 2000;
                let mut prev = curve.value(0.0).unwrap();
                assert_eq!(prev, 0.0);
                for i in 1..=n {
                    let tau = if i == n { t } else { t * i as f64 / n as f64 };
                    let v = curve.value(tau).unwrap();
                    assert!(v > prev, "alpha={a} t={t} i={i}");
                    prev = v;
                }
                let end = t.powf(a) / gamma(a + 1.0).unwrap();
                assert!(rel(prev, end) < 1e-14);
            }
        }
    }

    #[test]
    fn small_tau_expansion_is_continuous() {
        let curve = ScalingCurve::new(order(0.5), 1.0).unwrap();
        let below = curve.value(0.999_999e-8).unwrap();
        let above = curve.value(1.000_001e-8).unwrap();
        assert!(below < above);
        assert!(rel(below, above) < 1e-5);
    }

    proptest! {
        #[test]
        fn gamma_recurrence(x in 0.1f64..100.0) {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            prop_assert!(rel(rhs, lhs) <= 1e-12);
        }

        #[test]
        fn finite_difference_matches_curve_derivative(
            a in prop::sample::select(alloc::vec![0.25, 0.5, 1.0, 1.5, 2.0]),
            t in 0.5f64..3.0,
            frac in 0.05f64..0.95,
        ) {
            let curve = ScalingCurve::new(order(a), t).unwrap();
            let tau = frac * t;
            let h = 1e-5 * t;
            let fd = (curve.value(tau + h).unwrap() - curve.value(tau - h).unwrap()) / (2.0 * h);
            let exact = curve.derivative(tau).unwrap();
            prop_assert!(rel(fd, exact) < 1e-6, "fd {} exact {}", fd, exact);
        }
    }
}
