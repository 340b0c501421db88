use fracgeo_core::fractional::{self, FractionalIntegralSpec};
use fracgeo_core::quadrature::{riemann_integral, stieltjes_integral, Tolerance};
use fracgeo_core::special::{gamma, scaling_curve, Order};
use fracgeo_core::RealFunction;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
}

/// `c0 + c1 sin(w t) + c2 t^2`
fn smooth(c0: f64, c1: f64, w: f64, c2: f64) -> RealFunction {
    RealFunction::new("smooth", move |t| c0 + c1 * (w * t).sin() + c2 * t * t)
}

fn coefficients() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (-2.0f64..2.0, -2.0f64..2.0, 0.2f64..3.0, -1.0f64..1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn riemann_is_linear((c0, c1, w, c2) in coefficients(), k in -3.0f64..3.0) {
        let f = smooth(c0, c1, w, c2);
        let g = smooth(c2, c0, w + 0.5, c1);
        let h = {
            let (f, g) = (f.clone(), g.clone());
            RealFunction::try_new("f + k g", move |t| Ok(f.eval(t)? + k * g.eval(t)?))
        };
        let lhs = riemann_integral(&h, 0.0, 2.0, &tol()).unwrap().value;
        let rhs = riemann_integral(&f, 0.0, 2.0, &tol()).unwrap().value + k * riemann_integral(&g, 0.0, 2.0, &tol()).unwrap().value;
        prop_assert!(close(lhs, rhs, 1e-7), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn riemann_is_additive((c0, c1, w, c2) in coefficients(), split in 0.1f64..1.9) {
        let f = smooth(c0, c1, w, c2);
        let whole = riemann_integral(&f, 0.0, 2.0, &tol()).unwrap().value;
        let parts = riemann_integral(&f, 0.0, split, &tol()).unwrap().value + riemann_integral(&f, split, 2.0, &tol()).unwrap().value;
        prop_assert!(close(whole, parts, 1e-7));
    }

    #[test]
    fn stieltjes_against_identity_is_riemann((c0, c1, w, c2) in coefficients(), b in 0.5f64..3.0) {
        let f = smooth(c0, c1, w, c2);
        let s = stieltjes_integral(&f, &RealFunction::identity(), 0.0, b, &tol()).unwrap().value;
        let r = riemann_integral(&f, 0.0, b, &tol()).unwrap().value;
        prop_assert!(close(s, r, 1e-7), "{} vs {}", s, r);
    }

    #[test]
    fn unit_integrand_telescopes(p in 0.1f64..2.0, q in 0.0f64..1.0, b in 0.5f64..3.0) {
        let g = RealFunction::new("g", move |t| p * t + q * t * t * t);
        let s = stieltjes_integral(&RealFunction::constant(1.0), &g, 0.0, b, &tol()).unwrap();
        prop_assert!(close(s.value, p * b + q * b * b * b, 1e-12));
    }

    #[test]
    fn stieltjes_is_the_weighted_riemann_integral((c0, c1, w, c2) in coefficients(), p in 0.1f64..2.0, q in 0.0f64..1.0) {
        let f = smooth(c0, c1, w, c2);
        let g = RealFunction::new("g", move |t| p * t + q * t * t * t);
        let fg = {
            let f = f.clone();
            RealFunction::try_new("f g'", move |t| Ok(f.eval(t)? * (p + 3.0 * q * t * t)))
        };
        let s = stieltjes_integral(&f, &g, 0.0, 1.5, &tol()).unwrap().value;
        let r = riemann_integral(&fg, 0.0, 1.5, &tol()).unwrap().value;
        prop_assert!(close(s, r, 1e-7), "{} vs {}", s, r);
    }

    #[test]
    fn rl_routes_agree_on_smooth_integrands(
        (c0, c1, w, c2) in coefficients(),
        alpha in 0.2f64..2.5,
        t in 0.2f64..2.0,
    ) {
        let spec = FractionalIntegralSpec::new(Order::new(alpha).unwrap(), 0.0, t, smooth(c0, c1, w, c2)).unwrap();
        let s = fractional::rl_integral_stieltjes(&spec, &tol()).unwrap().value;
        let k = fractional::rl_integral_kernel(&spec, &tol()).unwrap().value;
        prop_assert!(close(s, k, 1e-6), "{} vs {}", s, k);
    }

    #[test]
    fn rl_of_nonnegative_integrand_grows_with_t(alpha in 0.2f64..2.0, t in 0.2f64..1.8) {
        let f = RealFunction::new("1 + t^2", |t| 1.0 + t * t);
        let at = |t: f64| {
            let spec = FractionalIntegralSpec::new(Order::new(alpha).unwrap(), 0.0, t, f.clone()).unwrap();
            fractional::rl_integral_kernel(&spec, &tol()).unwrap().value
        };
        prop_assert!(at(t) < at(t + 0.2));
    }

    #[test]
    fn scaling_curve_endpoint(alpha in 0.05f64..4.0, t in 0.01f64..10.0) {
        let order = Order::new(alpha).unwrap();
        let end = scaling_curve(order, t, t).unwrap();
        let expected = t.powf(alpha) / gamma(alpha + 1.0).unwrap();
        prop_assert!(close(end, expected, 1e-14));
        prop_assert_eq!(scaling_curve(order, t, 0.0).unwrap(), 0.0);
    }
}

#[test]
fn shifted_lower_terminal_matches_translated_problem() {
    // I^a f(t) from lower limit 1 equals I^a f(. + 1)(t - 1) from 0
    let alpha = Order::new(0.6).unwrap();
    let f = RealFunction::new("exp", f64::exp);
    let g = RealFunction::new("exp(t + 1)", |t| (t + 1.0).exp());
    let shifted = FractionalIntegralSpec::new(alpha, 1.0, 2.5, f).unwrap();
    let base = FractionalIntegralSpec::new(alpha, 0.0, 1.5, g).unwrap();
    let a = fractional::rl_integral_stieltjes(&shifted, &tol()).unwrap().value;
    let b = fractional::rl_integral_kernel(&base, &tol()).unwrap().value;
    assert!(close(a, b, 1e-6), "{a} vs {b}");
}
