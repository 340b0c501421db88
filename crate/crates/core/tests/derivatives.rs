use fracgeo_core::derivatives::{
    arc_length, arc_tolerance, classical_derivative, fractal_derivative, path_derivative, stieltjes_derivative,
    Stencil, DEFAULT_TOL,
};
use fracgeo_core::special::Order;
use fracgeo_core::{Error, RealFunction};
use proptest::prelude::*;

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chain_rule_through_the_integrator(a in -1.0f64..1.0, b in 0.5f64..2.0, t in 0.1f64..2.0) {
        // f = sin(g) with g = b t + t^3 gives df/dg = cos(g)
        let g = RealFunction::new("g", move |t| b * t + t * t * t);
        let f = RealFunction::new("f", move |t| (b * t + t * t * t).sin() + a);
        let d = stieltjes_derivative(&f, &g, t, DEFAULT_TOL).unwrap();
        prop_assert!(close(d.value, (b * t + t * t * t).cos(), 1e-7));
        prop_assert_eq!(d.stencil, Stencil::Central);
        prop_assert!(d.converged);
    }

    #[test]
    fn fractal_derivative_of_a_power(alpha in 0.2f64..2.0, p in 0.5f64..3.0, t in 0.2f64..3.0) {
        // d t^p / d t^alpha = (p / alpha) t^(p - alpha)
        let f = RealFunction::new("t^p", move |t| t.powf(p));
        let d = fractal_derivative(&f, Order::new(alpha).unwrap(), t, DEFAULT_TOL).unwrap();
        prop_assert!(close(d.value, p / alpha * t.powf(p - alpha), 1e-6), "{}", d.value);
    }

    #[test]
    fn path_derivative_is_bounded_by_the_classical_one(c in -2.0f64..2.0, t in 0.2f64..2.0) {
        let f = RealFunction::new("f", move |t| (c * t).sin() + t);
        let g = RealFunction::new("g", |t| t * t);
        let along = path_derivative(&f, &g, 0.0, t, DEFAULT_TOL).unwrap().value;
        let plain = classical_derivative(&f, t, DEFAULT_TOL).unwrap().value;
        prop_assert!(along.abs() <= plain.abs() * (1.0 + 1e-7));
        prop_assert!(close(along, plain / (1.0 + 4.0 * t * t).sqrt(), 1e-6));
    }

    #[test]
    fn arc_length_of_a_line(m in -3.0f64..3.0, t in 0.1f64..5.0) {
        let g = RealFunction::new("m t", move |t| m * t);
        let s = arc_length(&g, 0.0, t, &arc_tolerance()).unwrap();
        prop_assert!(close(s, t * (1.0 + m * m).sqrt(), 1e-10));
    }
}

#[test]
fn parabola_arc_length() {
    let g = RealFunction::parse("t^2").unwrap();
    let s = arc_length(&g, 0.0, 1.0, &arc_tolerance()).unwrap();
    assert!((s - 1.4789428575445974).abs() < 1e-9, "{s}");
}

#[test]
fn ratio_at_a_kink_free_point() {
    let f = RealFunction::parse("sin(t)").unwrap();
    let g = RealFunction::parse("t^2").unwrap();
    let d = stieltjes_derivative(&f, &g, 1.0, DEFAULT_TOL).unwrap();
    assert!((d.value - 0.2701511529340699).abs() < 1e-8);
}

#[test]
fn zero_slope_integrator_is_reported() {
    let f = RealFunction::parse("t").unwrap();
    let g = RealFunction::parse("(t - 1)^2").unwrap();
    match stieltjes_derivative(&f, &g, 1.0, DEFAULT_TOL) {
        Err(Error::DegenerateDenominator { t }) => assert_eq!(t, 1.0),
        Err(Error::NotConverged(r)) => assert!(!r.converged),
        other => panic!("{other:?}"),
    }
}
