//! Wavefront OBJ export. Vertices are `(t, tau, y)`; each strip between two
//! posts is one quad. Lines end in LF only.

use std::fmt::Write;

use fracgeo_core::geometry::{FenceAnimation, FenceScene};

use crate::{numfmt, TOOL_VERSION};

fn write_object(out: &mut String, name: &str, scene: &FenceScene, first_index: usize) -> usize {
    let m = numfmt::machine;
    writeln!(out, "o {name}").unwrap();
    for p in &scene.fence {
        writeln!(out, "v {} {} {}", m(p.t), m(p.tau), m(0.0)).unwrap();
        writeln!(out, "v {} {} {}", m(p.t), m(p.tau), m(p.y)).unwrap();
    }
    for i in 0..scene.fence.len().saturating_sub(1) {
        let foot = first_index + 2 * i;
        // foot_i, foot_{i+1}, top_{i+1}, top_i
        writeln!(out, "f {} {} {} {}", foot, foot + 2, foot + 3, foot + 1).unwrap();
    }
    first_index + 2 * scene.fence.len()
}

pub fn scene_to_obj(scene: &FenceScene) -> String {
    let mut out = format!("# {TOOL_VERSION} fence mesh (t, tau, y)\n");
    write_object(&mut out, "fence", scene, 1);
    out
}

/// One object per frame, named `frame_000`, `frame_001`, ...
pub fn animation_to_obj(anim: &FenceAnimation) -> String {
    let mut out = format!("# {TOOL_VERSION} fence animation mesh (t, tau, y)\n");
    let mut next = 1;
    for (i, frame) in anim.frames.iter().enumerate() {
        next = write_object(&mut out, &format!("frame_{i:03}"), &frame.scene, next);
    }
    out
}
