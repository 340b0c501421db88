//! Fractional-order and Stieltjes-type integrals and derivatives, together
//! with the fence/shadow constructions that give them a geometric reading.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the
//! verification runner and the command-line front end live in the `fracgeo`
//! companion crate.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`special`] | Gamma function, the self-scaling curve and its derivative |
//! | [`expr`] | Expression parser/evaluator and [`RealFunction`] |
//! | [`quadrature`] | Riemann and Riemann–Stieltjes integration |
//! | [`fractional`] | Riemann–Liouville integral in two formulations |
//! | [`derivatives`] | Stieltjes, path and fractal derivatives |
//! | [`geometry`] | Fence scenes, shadow polygons, tangents, animations |
//!
//! ```
//! use fracgeo_core::{fractional, quadrature::Tolerance, special::Order, RealFunction};
//!
//! let f = RealFunction::parse("1").unwrap();
//! let spec = fractional::FractionalIntegralSpec::new(Order::new(0.5).unwrap(), 0.0, 1.0, f).unwrap();
//! let r = fractional::rl_integral_stieltjes(&spec, &Tolerance::default()).unwrap();
//! assert!((r.value - 1.1283791670955126).abs() < 1e-7);
//! ```
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod derivatives;
mod error;
pub mod expr;
pub mod fractional;
pub mod geometry;
mod math;
pub mod quadrature;
pub mod special;

pub use error::Error;
pub use expr::RealFunction;

pub type Result<T, E = Error> = core::result::Result<T, E>;
