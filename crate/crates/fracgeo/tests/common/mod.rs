//! Random test functions with closed-form derivatives and antiderivatives.
//! Shared by the integration tests; deliberately separate from the family
//! used by `fracgeo verify`.
#![allow(dead_code)]

use fracgeo_core::RealFunction;
use rand::rngs::StdRng;
use rand::Rng;

pub fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn lit(x: f64) -> String {
    // `{:e}` is the shortest round-tripping form
    if x < 0.0 {
        format!("({x:e})")
    } else {
        format!("{x:e}")
    }
}

/// `a0 + a1 t + a3 t^3 + b cos(c t + d) + e / (1 + t)`, used on `t >= 0`.
#[derive(Debug, Clone, Copy)]
pub struct Wave {
    a0: f64,
    a1: f64,
    a3: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
}

impl Wave {
    pub fn random(rng: &mut StdRng) -> Self {
        Wave {
            a0: rng.gen_range(-2.0..2.0),
            a1: rng.gen_range(-1.0..1.0),
            a3: rng.gen_range(-0.5..0.5),
            b: rng.gen_range(-1.0..1.0),
            c: rng.gen_range(0.3..3.0),
            d: rng.gen_range(-3.0..3.0),
            e: rng.gen_range(-1.0..1.0),
        }
    }

    pub fn text(&self) -> String {
        format!(
            "{} + {}*t + {}*t^3 + {}*cos({}*t + {}) + {}/(1 + t)",
            lit(self.a0),
            lit(self.a1),
            lit(self.a3),
            lit(self.b),
            lit(self.c),
            lit(self.d),
            lit(self.e)
        )
    }

    pub fn function(&self) -> RealFunction {
        RealFunction::parse(&self.text()).expect("generated expression parses")
    }

    pub fn value(&self, t: f64) -> f64 {
        self.a0 + self.a1 * t + self.a3 * t.powi(3) + self.b * (self.c * t + self.d).cos() + self.e / (1.0 + t)
    }

    pub fn slope(&self, t: f64) -> f64 {
        self.a1 + 3.0 * self.a3 * t * t
            - self.b * self.c * (self.c * t + self.d).sin()
            - self.e / ((1.0 + t) * (1.0 + t))
    }

    pub fn primitive(&self, t: f64) -> f64 {
        self.a0 * t
            + 0.5 * self.a1 * t * t
            + 0.25 * self.a3 * t.powi(4)
            + self.b / self.c * (self.c * t + self.d).sin()
            + self.e * (1.0 + t).ln()
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.primitive(b) - self.primitive(a)
    }
}

/// `p t + q t^2 + r sqrt(1 + t)` with non-negative coefficients: increasing on `t >= 0`.
#[derive(Debug, Clone, Copy)]
pub struct Ramp {
    p: f64,
    q: f64,
    r: f64,
}

impl Ramp {
    pub fn random(rng: &mut StdRng) -> Self {
        Ramp {
            p: rng.gen_range(0.1..2.0),
            q: rng.gen_range(0.0..1.0),
            r: rng.gen_range(0.0..1.0),
        }
    }

    pub fn function(&self) -> RealFunction {
        let text = format!("{}*t + {}*t^2 + {}*sqrt(1 + t)", lit(self.p), lit(self.q), lit(self.r));
        RealFunction::parse(&text).expect("generated expression parses")
    }

    pub fn slope(&self, t: f64) -> f64 {
        self.p + 2.0 * self.q * t + 0.5 * self.r / (1.0 + t).sqrt()
    }
}

/// Interval `[a, b]` inside `[0, 3]`, at least 0.5 long.
pub fn interval(rng: &mut StdRng) -> (f64, f64) {
    let a = rng.gen_range(0.0..1.0);
    (a, a + rng.gen_range(0.5..2.0))
}

/// Draws until `accept` holds; keeps relative comparisons away from zeros.
pub fn draw<T>(rng: &mut StdRng, mut make: impl FnMut(&mut StdRng) -> T, accept: impl Fn(&T) -> bool) -> T {
    loop {
        let x = make(rng);
        if accept(&x) {
            return x;
        }
    }
}
