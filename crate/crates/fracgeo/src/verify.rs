//! Self-check suites run by `fracgeo verify`.
//!
//! Every suite compares one operator against an independent formulation or a
//! closed form and reports the worst deviation. `Quick` runs reduced grids and
//! fewer random cases; `Full` runs the complete ones.

use std::f64::consts::PI;
use std::fmt::Write;

use fracgeo_core::derivatives::{self, Domain, DEFAULT_TOL};
use fracgeo_core::fractional::{self, CubicGrid, FractionalIntegralSpec};
use fracgeo_core::geometry;
use fracgeo_core::quadrature::{self, Tolerance};
use fracgeo_core::special::{gamma, Order};
use fracgeo_core::{Error, RealFunction};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::numfmt;

const SEED: u64 = 0x6672_6163_6765_6f00;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

/// Which side of the bound a suite's metric must fall on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    /// Worst error seen (or the smallest value, for [`Bound::AtLeast`]).
    pub worst: f64,
    pub bound: Bound,
    /// First operator error encountered, if any case failed outright.
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.cases > 0
            && match self.bound {
                Bound::AtMost(b) => self.worst <= b,
                Bound::AtLeast(b) => self.worst >= b,
            }
    }
}

struct Suite {
    report: SuiteReport,
}

impl Suite {
    fn new(name: &'static str, bound: Bound) -> Self {
        let worst = match bound {
            Bound::AtMost(_) => 0.0,
            Bound::AtLeast(_) => f64::INFINITY,
        };
        Suite {
            report: SuiteReport {
                name,
                cases: 0,
                worst,
                bound,
                error: None,
            },
        }
    }

    fn record(&mut self, metric: f64) {
        let r = &mut self.report;
        r.cases += 1;
        r.worst = match r.bound {
            _ if metric.is_nan() => f64::NAN,
            _ if r.worst.is_nan() => f64::NAN,
            Bound::AtMost(_) => r.worst.max(metric),
            Bound::AtLeast(_) => r.worst.min(metric),
        };
    }

    fn check(&mut self, outcome: Result<f64, Error>) {
        match outcome {
            Ok(metric) => self.record(metric),
            Err(e) => {
                self.report.cases += 1;
                self.report.error.get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn order(alpha: f64) -> Order {
    Order::new(alpha).expect("suite orders are positive")
}

fn parse(text: &str) -> RealFunction {
    RealFunction::parse(text).expect("suite expressions are well formed")
}

/// Literal for an expression string; negative values are parenthesized.
fn lit(x: f64) -> String {
    if x < 0.0 {
        format!("({})", numfmt::machine(x))
    } else {
        numfmt::machine(x)
    }
}

/// `c0 + c1 sin(w t + phi) + c2 t^2 + c3 exp(k t)` with known derivative and antiderivative.
#[derive(Debug, Clone, Copy)]
struct Smooth {
    c0: f64,
    c1: f64,
    w: f64,
    phi: f64,
    c2: f64,
    c3: f64,
    k: f64,
}

impl Smooth {
    fn random(rng: &mut StdRng) -> Self {
        let k = rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        Smooth {
            c0: rng.gen_range(-1.0..1.0),
            c1: rng.gen_range(-1.0..1.0),
            w: rng.gen_range(0.5..2.0),
            phi: rng.gen_range(0.0..2.0 * PI),
            c2: rng.gen_range(-1.0..1.0),
            c3: rng.gen_range(-0.5..0.5),
            k,
        }
    }

    fn expr(&self) -> String {
        format!(
            "{} + {}*sin({}*t + {}) + {}*t^2 + {}*exp({}*t)",
            lit(self.c0),
            lit(self.c1),
            lit(self.w),
            lit(self.phi),
            lit(self.c2),
            lit(self.c3),
            lit(self.k)
        )
    }

    fn function(&self) -> RealFunction {
        parse(&self.expr())
    }

    fn derivative(&self, t: f64) -> f64 {
        self.c1 * self.w * (self.w * t + self.phi).cos() + 2.0 * self.c2 * t + self.c3 * self.k * (self.k * t).exp()
    }

    fn antiderivative(&self, t: f64) -> f64 {
        self.c0 * t - self.c1 / self.w * (self.w * t + self.phi).cos()
            + self.c2 * t * t * t / 3.0
            + self.c3 / self.k * (self.k * t).exp()
    }
}

/// `p t + q t^3 + r exp(s t)`, increasing with slope at least `p`.
#[derive(Debug, Clone, Copy)]
struct Monotone {
    p: f64,
    q: f64,
    r: f64,
    s: f64,
}

impl Monotone {
    fn random(rng: &mut StdRng) -> Self {
        Monotone {
            p: rng.gen_range(0.2..1.5),
            q: rng.gen_range(0.0..0.5),
            r: rng.gen_range(0.0..0.5),
            s: rng.gen_range(0.2..1.0),
        }
    }

    fn function(&self) -> RealFunction {
        parse(&format!(
            "{}*t + {}*t^3 + {}*exp({}*t)",
            lit(self.p),
            lit(self.q),
            lit(self.r),
            lit(self.s)
        ))
    }

    fn derivative(&self, t: f64) -> f64 {
        self.p + 3.0 * self.q * t * t + self.r * self.s * (self.s * t).exp()
    }
}

fn random_interval(rng: &mut StdRng) -> (f64, f64) {
    let a = rng.gen_range(0.0..0.5);
    (a, a + rng.gen_range(0.5..1.5))
}

/// A smooth function and a point in `(a, b)` where its slope is at least 0.1
/// in magnitude, so relative errors stay meaningful.
fn sloped_case(rng: &mut StdRng) -> (Smooth, f64, f64, f64) {
    loop {
        let f = Smooth::random(rng);
        let (a, b) = random_interval(rng);
        let t = rng.gen_range(a + 0.1 * (b - a)..b - 0.1 * (b - a));
        if f.derivative(t).abs() >= 0.1 {
            return (f, a, b, t);
        }
    }
}

/// A smooth function and interval whose integral is at least 0.1 in magnitude.
fn integral_case(rng: &mut StdRng) -> (Smooth, f64, f64) {
    loop {
        let f = Smooth::random(rng);
        let (a, b) = random_interval(rng);
        if (f.antiderivative(b) - f.antiderivative(a)).abs() >= 0.1 {
            return (f, a, b);
        }
    }
}

/// `(x, Gamma(x))` to 18 significant digits.
#[allow(clippy::excessive_precision)]
pub const GAMMA_REFERENCE: [(f64, f64); 30] = [
    (0.001, 9.99423772484595474e+02),
    (0.1, 9.51350769866873058e+00),
    (0.25, 3.62560990822190821e+00),
    (1.0 / 3.0, 2.67893853470774790e+00),
    (0.5, 1.77245385090551610e+00),
    (0.75, 1.22541670246517764e+00),
    (1.0, 1.0),
    (1.5, 8.86226925452758052e-01),
    (2.0, 1.0),
    (2.5, 1.32934038817913702e+00),
    (3.0, 2.0),
    (3.7, 4.17065178379660395e+00),
    (5.0, 24.0),
    (7.25, 1.15538101391998975e+03),
    (10.0, 3.6288e+05),
    (12.5, 1.36843365465565860e+08),
    (17.0, 2.09227898880000000e+13),
    (20.5, 5.40624298233507520e+17),
    (33.3, 7.48757759652263294e+35),
    (50.0, 6.08281864034267522e+62),
    (64.5, 1.58299188153127679e+88),
    (77.7, 3.93891963842931685e+112),
    (99.9, 5.89173215164451597e+155),
    (100.0, 9.33262154439441533e+155),
    (120.25, 1.84360715625514050e+197),
    (143.5, 3.22037048173080856e+246),
    (150.0, 3.80892263763056979e+260),
    (160.1, 4.89357230084629397e+282),
    (169.5, 3.28147045106784624e+303),
    (170.0, 4.26906800900470511e+304),
];

fn gamma_oracle(_level: Level) -> SuiteReport {
    let mut suite = Suite::new("gamma oracle", Bound::AtMost(1e-12));
    for &(x, reference) in &GAMMA_REFERENCE {
        suite.check(gamma(x).map(|v| rel(v, reference)));
    }
    suite.finish()
}

const ORDERS: [f64; 6] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0];
const POWERS: [f64; 3] = [0.0, 1.0, 2.0];
const TIMES: [f64; 3] = [0.5, 1.0, 2.0];

fn order_grid(level: Level) -> Vec<(f64, f64)> {
    let (orders, times): (&[f64], &[f64]) = level.pick((&[0.25, 1.0, 2.0], &[1.0]), (&ORDERS, &TIMES));
    orders
        .iter()
        .flat_map(|&al| times.iter().map(move |&t| (al, t)))
        .collect()
}

fn power_rule(level: Level, tol: &Tolerance) -> SuiteReport {
    let mut suite = Suite::new("power-rule oracle", Bound::AtMost(1e-6));
    for (alpha, t) in order_grid(level) {
        for p in POWERS {
            let f = parse(&format!("t^{}", lit(p)));
            let outcome = (|| {
                let spec = FractionalIntegralSpec::new(order(alpha), 0.0, t, f)?;
                let exact = fractional::power_rule_oracle(p, order(alpha), t)?;
                let s = fractional::rl_integral_stieltjes(&spec, tol)?.value;
                let k = fractional::rl_integral_kernel(&spec, tol)?.value;
                Ok(rel(s, exact).max(rel(k, exact)))
            })();
            suite.check(outcome);
        }
    }
    suite.finish()
}

fn formulation_equivalence(level: Level, tol: &Tolerance) -> SuiteReport {
    let mut suite = Suite::new("formulation equivalence", Bound::AtMost(2e-6));
    for (alpha, t) in order_grid(level) {
        for text in ["1", "t", "t^2", "sin(t)"] {
            let outcome = (|| {
                let spec = FractionalIntegralSpec::new(order(alpha), 0.0, t, parse(text))?;
                let s = fractional::rl_integral_stieltjes(&spec, tol)?.value;
                let k = fractional::rl_integral_kernel(&spec, tol)?.value;
                Ok(rel(s, k))
            })();
            suite.check(outcome);
        }
    }
    suite.finish()
}

/// Points in the interpolation grid used to compose two fractional integrals.
pub const SEMIGROUP_NODES: usize = 513;

/// `I^beta (I^alpha f)` at `t`: the inner integral is sampled on
/// [`SEMIGROUP_NODES`] uniform points of `[0, t]` and interpolated with
/// piecewise cubics; both integrals use the kernel route.
pub fn composed_integral(f: &RealFunction, alpha: Order, beta: Order, t: f64, tol: &Tolerance) -> Result<f64, Error> {
    let inner = CubicGrid::sample(0.0, t, SEMIGROUP_NODES, |s| {
        if s == 0.0 {
            return Ok(0.0);
        }
        let spec = FractionalIntegralSpec::new(alpha, 0.0, s, f.clone())?;
        Ok(fractional::rl_integral_kernel(&spec, tol)?.value)
    })?;
    let spec = FractionalIntegralSpec::new(beta, 0.0, t, inner.into_function())?;
    Ok(fractional::rl_integral_kernel(&spec, tol)?.value)
}

fn semigroup(_level: Level, tol: &Tolerance) -> SuiteReport {
    let mut suite = Suite::new("semigroup", Bound::AtMost(1e-4));
    for text in ["1", "t"] {
        let f = parse(text);
        let outcome = (|| {
            let composed = composed_integral(&f, order(0.4), order(0.3), 1.0, tol)?;
            let spec = FractionalIntegralSpec::new(order(0.7), 0.0, 1.0, f.clone())?;
            let direct = fractional::rl_integral_kernel(&spec, tol)?.value;
            Ok(rel(composed, direct))
        })();
        suite.check(outcome);
    }
    suite.finish()
}

fn classical_reductions(level: Level, tol: &Tolerance, rng: &mut StdRng) -> SuiteReport {
    let mut suite = Suite::new("classical reductions", Bound::AtMost(1e-6));
    let cases = level.pick(5, 20);
    let id = RealFunction::identity();
    for _ in 0..cases {
        let (f, a, b) = integral_case(rng);
        let exact = f.antiderivative(b) - f.antiderivative(a);
        let fun = f.function();
        suite.check((|| {
            let spec = FractionalIntegralSpec::new(order(1.0), a, b, fun.clone())?;
            let s = fractional::rl_integral_stieltjes(&spec, tol)?.value;
            let k = fractional::rl_integral_kernel(&spec, tol)?.value;
            Ok(rel(s, exact).max(rel(k, exact)))
        })());
        suite.check(quadrature::stieltjes_integral(&fun, &id, a, b, tol).map(|r| rel(r.value, exact)));
    }
    for _ in 0..cases {
        let (f, _, _, t) = sloped_case(rng);
        let exact = f.derivative(t);
        let fun = f.function();
        suite.check(derivatives::stieltjes_derivative(&fun, &id, t, DEFAULT_TOL).map(|d| rel(d.value, exact)));
    }
    for _ in 0..cases {
        let (f, a, _, t) = sloped_case(rng);
        let exact = f.derivative(t);
        let fun = f.function();
        suite.check(derivatives::fractal_derivative(&fun, order(1.0), t, DEFAULT_TOL).map(|d| rel(d.value, exact)));
        let flat = RealFunction::constant(rng.gen_range(-1.0..1.0));
        suite.check(derivatives::path_derivative(&fun, &flat, a, t, DEFAULT_TOL).map(|d| rel(d.value, exact)));
    }
    suite.finish()
}

fn ratio_identities(level: Level, rng: &mut StdRng) -> SuiteReport {
    let mut suite = Suite::new("ratio/path identities", Bound::AtMost(1e-5));
    for _ in 0..level.pick(10, 50) {
        let (f, a, _, t) = sloped_case(rng);
        let g = Monotone::random(rng);
        let (fun, gun) = (f.function(), g.function());
        let (df, dg) = (f.derivative(t), g.derivative(t));
        suite.check(derivatives::stieltjes_derivative(&fun, &gun, t, DEFAULT_TOL).map(|d| rel(d.value, df / dg)));
        let along = df / (1.0 + dg * dg).sqrt();
        suite.check(derivatives::path_derivative(&fun, &gun, a, t, DEFAULT_TOL).map(|d| rel(d.value, along)));
    }
    suite.finish()
}

fn fractal_specialization(level: Level, rng: &mut StdRng) -> SuiteReport {
    // metric is 1 for a bitwise mismatch, 0 otherwise
    let mut suite = Suite::new("fractal specialization", Bound::AtMost(0.0));
    let half_line = Domain::new(0.0, f64::INFINITY).expect("non-empty");
    for _ in 0..level.pick(20, 100) {
        let alpha = order(rng.gen_range(0.1..2.5));
        let t = rng.gen_range(0.05..3.0);
        let f = Smooth::random(rng).function();
        let outcome = (|| {
            let fractal = derivatives::fractal_derivative(&f, alpha, t, DEFAULT_TOL)?;
            let direct = derivatives::stieltjes_derivative_within(
                &f,
                &derivatives::power_path(alpha),
                t,
                half_line,
                DEFAULT_TOL,
            )?;
            let same = fractal.value.to_bits() == direct.value.to_bits() && fractal == direct;
            Ok(if same { 0.0 } else { 1.0 })
        })();
        suite.check(outcome);
    }
    suite.finish()
}

/// Strip counts used to measure how fast shadow areas converge.
pub const DUALITY_SAMPLES: [usize; 5] = [64, 128, 256, 512, 1024];

/// Least-squares slope of `-log2(error)` against `log2(n)`.
pub fn observed_order(samples: &[usize], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = samples.iter().map(|&n| (n as f64).log2()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| -e.log2()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn shadow_duality(level: Level, tol: &Tolerance, rng: &mut StdRng) -> [SuiteReport; 2] {
    let mut accuracy = Suite::new("shadow-integral duality", Bound::AtMost(1e-3));
    let mut convergence = Suite::new("shadow convergence order", Bound::AtLeast(1.9));
    // The order fit needs references well below the n = 1024 shadow error, so
    // it uses Simpson on f g' with the analytic g'.
    let reference_tol = Tolerance::new(1e-12, 1e-15, 1 << 22).expect("valid tolerance");
    for _ in 0..level.pick(6, 30) {
        let (f, a, b) = integral_case(rng);
        let g = Monotone::random(rng);
        let (fun, gun) = (f.function(), g.function());
        let weighted = {
            let fun = fun.clone();
            RealFunction::try_new("f g'", move |t| Ok(fun.eval(t)? * g.derivative(t)))
        };
        let outcome = (|| -> Result<_, Error> {
            let riemann = quadrature::riemann_integral(&fun, a, b, tol)?.value;
            let stieltjes = quadrature::stieltjes_integral(&fun, &gun, a, b, tol)?.value;
            let exact_ty = f.antiderivative(b) - f.antiderivative(a);
            let exact_tau = quadrature::riemann_integral(&weighted, a, b, &reference_tol)?.value;
            let mut err_ty = Vec::new();
            let mut err_tau = Vec::new();
            let mut last = (0.0, 0.0);
            for n in DUALITY_SAMPLES {
                let scene = geometry::build_scene(&fun, &gun, a, b, n, None)?;
                last = (scene.shadow_ty_area(), scene.shadow_tau_y_area());
                err_ty.push(rel(last.0, exact_ty));
                err_tau.push(rel(last.1, exact_tau));
            }
            Ok(([rel(last.0, riemann), rel(last.1, stieltjes)], [err_ty, err_tau]))
        })();
        match outcome {
            Ok((finals, histories)) => {
                for e in finals {
                    accuracy.record(e);
                }
                for errors in &histories {
                    convergence.record(observed_order(&DUALITY_SAMPLES, errors));
                }
            }
            Err(e) => {
                let message = e.to_string();
                accuracy.check(Err(e));
                convergence.report.error.get_or_insert(message);
            }
        }
    }
    [accuracy.finish(), convergence.finish()]
}

fn rl_animation(level: Level, tol: &Tolerance) -> [SuiteReport; 2] {
    let mut shadow = Suite::new("rl animation", Bound::AtMost(1e-2));
    let mut linear = Suite::new("rl animation, unit order", Bound::AtMost(1e-3));
    let frames = level.pick(4, 24);
    for alpha in [0.5, 1.0] {
        for text in ["1", "t"] {
            let f = parse(text);
            let anim = match geometry::build_rl_animation(&f, order(alpha), 0.0, 1.0, frames, 256, tol) {
                Ok(anim) => anim,
                Err(e) => {
                    shadow.check(Err(e));
                    continue;
                }
            };
            for frame in &anim.frames {
                let area = frame.scene.shadow_tau_y_area();
                shadow.check((|| {
                    let spec = FractionalIntegralSpec::new(order(alpha), 0.0, frame.t, f.clone())?;
                    Ok(rel(area, fractional::rl_integral_stieltjes(&spec, tol)?.value))
                })());
                if alpha == 1.0 && text == "1" {
                    linear.record((area - frame.t).abs());
                }
            }
        }
    }
    [shadow.finish(), linear.finish()]
}

/// Runs every suite at `level`. Random cases are drawn from a fixed seed.
pub fn run_suites(level: Level) -> Vec<SuiteReport> {
    let tol = Tolerance::default();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut reports = vec![
        gamma_oracle(level),
        power_rule(level, &tol),
        formulation_equivalence(level, &tol),
        semigroup(level, &tol),
        classical_reductions(level, &tol, &mut rng),
        ratio_identities(level, &mut rng),
        fractal_specialization(level, &mut rng),
    ];
    reports.extend(shadow_duality(level, &tol, &mut rng));
    reports.extend(rl_animation(level, &tol));
    reports
}

pub fn all_passed(reports: &[SuiteReport]) -> bool {
    reports.iter().all(SuiteReport::passed)
}

/// Fixed-width pass/fail table, one row per suite.
pub fn render_table(reports: &[SuiteReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.name.len())
        .max()
        .unwrap_or(0)
        .max("suite".len());
    let mut out = String::new();
    writeln!(
        out,
        "{:<width$}  {:>5}  {:>12}  {:>12}  result",
        "suite", "cases", "max error", "tolerance"
    )
    .unwrap();
    for r in reports {
        let bound = match r.bound {
            Bound::AtMost(b) => format!("<= {}", short(b)),
            Bound::AtLeast(b) => format!(">= {}", short(b)),
        };
        let status = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{:<width$}  {:>5}  {:>12}  {:>12}  {status}",
            r.name,
            r.cases,
            short(r.worst),
            bound
        )
        .unwrap();
        if let Some(e) = &r.error {
            writeln!(out, "    error: {e}").unwrap();
        }
    }
    out
}

fn short(x: f64) -> String {
    if x == 0.0 || (0.1..1000.0).contains(&x.abs()) {
        format!("{x:.2}")
    } else {
        format!("{x:.2e}")
    }
}
