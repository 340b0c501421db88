//! File formats, verification suites and the command-line front end for
//! `fracgeo-core`.
//!
//! * [`scene_file`]: JSON scene and animation documents
//! * [`mesh`]: Wavefront OBJ export of fence surfaces
//! * [`report`]: CSV area report for animations
//! * [`verify`]: cross-formulation and oracle suites behind `fracgeo verify`
//! * [`cli`]: argument parsing and dispatch

pub mod cli;
pub mod mesh;
pub mod numfmt;
pub mod report;
pub mod scene_file;
pub mod verify;

pub const TOOL_VERSION: &str = concat!("fracgeo ", env!("CARGO_PKG_VERSION"));
