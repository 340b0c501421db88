//! Fence and shadow constructions.
//!
//! A fence of height `y = f(t)` stands on the plane curve `tau = g(t)`,
//! `a <= t <= b`. Its projection on the `(t, y)` plane is the region under
//! `f`, whose area is `∫ f dt`; its projection on the `(tau, y)` plane is the
//! region under the parametric curve `(g(t), f(t))`, whose area is `∫ f dg`.
//! The three tangent lines at a marked point carry the classical derivative
//! (`(t, y)` plane), the derivative along the path (on the fence), and the
//! Stieltjes derivative (`(tau, y)` plane).
//!
//! With `g` set to the self-scaling curve anchored at a moving time `t`, the
//! `(tau, y)` shadow is the Riemann–Liouville integral; [`build_rl_animation`]
//! produces one scene per time step.

use alloc::vec::Vec;

use crate::derivatives::{self, DerivativeResult, Domain, DEFAULT_TOL};
use crate::fractional::{self, FractionalIntegralSpec};
use crate::math::{self, CompensatedSum};
use crate::quadrature::{self, QuadratureResult, Tolerance};
use crate::special::Order;
use crate::{Error, RealFunction, Result};

pub const MIN_SAMPLES: usize = 8;

/// Top vertex of a fence post; its foot is `(t, tau, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FencePost {
    pub t: f64,
    pub tau: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentPlane {
    /// Classical derivative in the `(t, y)` plane.
    Ty,
    /// Derivative along the path, on the fence itself.
    Fence,
    /// Stieltjes derivative in the `(tau, y)` plane.
    TauY,
}

impl TangentPlane {
    pub fn name(self) -> &'static str {
        match self {
            TangentPlane::Ty => "ty",
            TangentPlane::Fence => "fence",
            TangentPlane::TauY => "tau_y",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub plane: TangentPlane,
    /// `(t, y)`, `(t, tau, y)` or `(tau, y)` depending on the plane.
    pub point: Vec<f64>,
    /// `None` when the derivative is degenerate (e.g. a locally flat `g`).
    pub slope: Option<f64>,
    /// Unit direction of the base curve in the `(t, tau)` plane; only used
    /// by the fence tangent.
    pub heading: [f64; 2],
}

impl Tangent {
    /// Ends of the tangent segment whose projection on the horizontal
    /// direction has length `half_run` on either side of the point.
    pub fn endpoints(&self, half_run: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let slope = self.slope?;
        let dir: Vec<f64> = match self.plane {
            TangentPlane::Ty | TangentPlane::TauY => alloc::vec![half_run, half_run * slope],
            TangentPlane::Fence => {
                alloc::vec![half_run * self.heading[0], half_run * self.heading[1], half_run * slope]
            }
        };
        let lo = self.point.iter().zip(&dir).map(|(p, d)| p - d).collect();
        let hi = self.point.iter().zip(&dir).map(|(p, d)| p + d).collect();
        Some((lo, hi))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FenceScene {
    pub a: f64,
    pub b: f64,
    /// Number of strips; the grid has `n + 1` posts.
    pub n: usize,
    pub t_star: f64,
    pub fence: Vec<FencePost>,
    /// Closed loop (first vertex repeated at the end) under `y = f(t)`.
    pub shadow_ty: Vec<[f64; 2]>,
    /// Closed loop under the parametric curve `(g(t), f(t))`.
    pub shadow_tau_y: Vec<[f64; 2]>,
    /// Red, green and blue tangents, in that order.
    pub tangents: [Tangent; 3],
}

impl FenceScene {
    pub fn shadow_ty_area(&self) -> f64 {
        shoelace_area(&self.shadow_ty)
    }

    pub fn shadow_tau_y_area(&self) -> f64 {
        shoelace_area(&self.shadow_tau_y)
    }

    pub fn tangent(&self, plane: TangentPlane) -> &Tangent {
        match plane {
            TangentPlane::Ty => &self.tangents[0],
            TangentPlane::Fence => &self.tangents[1],
            TangentPlane::TauY => &self.tangents[2],
        }
    }
}

/// Signed area of a vertex loop (counter-clockwise positive). A repeated
/// closing vertex is harmless.
pub fn shoelace_area(vertices: &[[f64; 2]]) -> f64 {
    let Some(&[x0, y0]) = vertices.first() else {
        return 0.0;
    };
    let mut sum = CompensatedSum::default();
    for (p, q) in vertices.iter().zip(vertices.iter().cycle().skip(1)) {
        let (px, py) = (p[0] - x0, p[1] - y0);
        let (qx, qy) = (q[0] - x0, q[1] - y0);
        sum.add(px * qy - qx * py);
    }
    0.5 * sum.value()
}

// Closed loop: baseline left to right, then the top edge right to left.
fn shadow_loop(points: impl DoubleEndedIterator<Item = [f64; 2]> + Clone) -> Vec<[f64; 2]> {
    let first = points.clone().next();
    let last = points.clone().next_back();
    let mut out = Vec::new();
    if let (Some(first), Some(last)) = (first, last) {
        out.push([first[0], 0.0]);
        out.push([last[0], 0.0]);
        out.extend(points.rev());
        out.push([first[0], 0.0]);
    }
    out
}

fn absent_if_degenerate(r: Result<DerivativeResult>) -> Result<Option<f64>> {
    match r {
        Ok(d) => Ok(Some(d.value)),
        Err(Error::DegenerateDenominator { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Samples the fence of `f` along `tau = g(t)` on `n + 1` uniform posts and
/// attaches the three tangents at `t_star` (interval midpoint by default).
pub fn build_scene(
    f: &RealFunction,
    g: &RealFunction,
    a: f64,
    b: f64,
    n: usize,
    t_star: Option<f64>,
) -> Result<FenceScene> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::Domain {
            context: "scene interval must be finite with a < b",
            value: b - a,
        });
    }
    if n < MIN_SAMPLES {
        return Err(Error::Domain {
            context: "scene needs at least 8 strips",
            value: n as f64,
        });
    }
    let t_star = t_star.unwrap_or(0.5 * (a + b));
    if !(a..=b).contains(&t_star) {
        return Err(Error::Domain {
            context: "marked point must lie in [a, b]",
            value: t_star,
        });
    }

    let mut fence = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = quadrature::node(a, b, i, n);
        fence.push(FencePost {
            t,
            tau: g.eval(t)?,
            y: f.eval(t)?,
        });
    }
    let slack = 1e-13 * (fence[0].tau.abs() + fence[n].tau.abs() + 1.0);
    for w in fence.windows(2) {
        let drop = w[0].tau - w[1].tau;
        if drop > slack {
            return Err(Error::Monotonicity { at: w[1].t, drop });
        }
    }

    let shadow_ty = shadow_loop(fence.iter().map(|p| [p.t, p.y]));
    let shadow_tau_y = shadow_loop(fence.iter().map(|p| [p.tau, p.y]));

    let domain = Domain::new(a, b)?;
    let y_star = f.eval(t_star)?;
    let tau_star = g.eval(t_star)?;
    let red = absent_if_degenerate(derivatives::classical_derivative_within(f, t_star, domain, DEFAULT_TOL))?;
    let green = absent_if_degenerate(derivatives::path_derivative_within(
        f,
        g,
        a,
        t_star,
        domain,
        DEFAULT_TOL,
    ))?;
    let blue = absent_if_degenerate(derivatives::stieltjes_derivative_within(
        f,
        g,
        t_star,
        domain,
        DEFAULT_TOL,
    ))?;
    let g_slope = derivatives::curve_slope(g, t_star, domain)?;
    let norm = math::sqrt(1.0 + g_slope * g_slope);
    let heading = [1.0 / norm, g_slope / norm];

    let tangents = [
        Tangent {
            plane: TangentPlane::Ty,
            point: alloc::vec![t_star, y_star],
            slope: red,
            heading: [1.0, 0.0],
        },
        Tangent {
            plane: TangentPlane::Fence,
            point: alloc::vec![t_star, tau_star, y_star],
            slope: green,
            heading,
        },
        Tangent {
            plane: TangentPlane::TauY,
            point: alloc::vec![tau_star, y_star],
            slope: blue,
            heading: [1.0, 0.0],
        },
    ];

    Ok(FenceScene {
        a,
        b,
        n,
        t_star,
        fence,
        shadow_ty,
        shadow_tau_y,
        tangents,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnimationFrame {
    pub t: f64,
    pub scene: FenceScene,
    /// `I^alpha f(t)` from the Stieltjes route, for comparison with the shadow.
    pub rl: QuadratureResult,
}

/// Frames of the self-scaling fence for `t` on a uniform grid in `(a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FenceAnimation {
    pub alpha: Order,
    pub a: f64,
    pub b: f64,
    pub frames: Vec<AnimationFrame>,
}

/// Frame `k` (1-based) uses `t_k = a + k (b - a) / frames` and
/// `g = g_{t_k - a}(tau - a)` on `[a, t_k]`.
pub fn build_rl_animation(
    f: &RealFunction,
    alpha: Order,
    a: f64,
    b: f64,
    frames: usize,
    n: usize,
    tol: &Tolerance,
) -> Result<FenceAnimation> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::Domain {
            context: "animation interval must be finite with a < b",
            value: b - a,
        });
    }
    if frames == 0 {
        return Err(Error::Domain {
            context: "animation needs at least one frame",
            value: 0.0,
        });
    }
    let frames = (1..=frames)
        .map(|k| {
            let t = quadrature::node(a, b, k, frames);
            let g = fractional::shifted_scaling_curve(alpha, a, t)?;
            let scene = build_scene(f, &g, a, t, n, None)?;
            let spec = FractionalIntegralSpec::new(alpha, a, t, f.clone())?;
            let rl = fractional::rl_integral_stieltjes(&spec, tol)?;
            Ok(AnimationFrame { t, scene, rl })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FenceAnimation { alpha, a, b, frames })
}
