//! JSON scene documents.
//!
//! ```text
//! {
//!   "meta": { "alpha"?, "a", "b", "n", "t_star", "tool_version" },
//!   "fence": [[t, tau, y], ...],          // top edge; feet are at y = 0
//!   "shadow_ty": [[t, y], ...],           // closed loop
//!   "shadow_tau_y": [[tau, y], ...],      // closed loop
//!   "tangents": [{ "plane": "ty" | "fence" | "tau_y", "point": [...], "slope"? }, ...]
//! }
//! ```
//!
//! Every float is written with 17 significant digits. An animation document
//! wraps one scene per frame.

use fracgeo_core::geometry::{FenceAnimation, FenceScene, Tangent};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::{numfmt, TOOL_VERSION};

/// A float serialized verbatim with 17 significant digits.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!("non-finite number {}", self.0)));
        }
        let raw = RawValue::from_string(numfmt::machine(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

fn nums<const N: usize>(xs: [f64; N]) -> [Num; N] {
    xs.map(Num)
}

#[derive(Serialize)]
struct SceneMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<Num>,
    a: Num,
    b: Num,
    n: usize,
    t_star: Num,
    tool_version: &'static str,
}

#[derive(Serialize)]
struct TangentDoc {
    plane: &'static str,
    point: Vec<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slope: Option<Num>,
}

impl From<&Tangent> for TangentDoc {
    fn from(t: &Tangent) -> Self {
        TangentDoc {
            plane: t.plane.name(),
            point: t.point.iter().copied().map(Num).collect(),
            slope: t.slope.map(Num),
        }
    }
}

#[derive(Serialize)]
struct SceneDoc {
    meta: SceneMeta,
    fence: Vec<[Num; 3]>,
    shadow_ty: Vec<[Num; 2]>,
    shadow_tau_y: Vec<[Num; 2]>,
    tangents: Vec<TangentDoc>,
}

impl SceneDoc {
    fn new(scene: &FenceScene, alpha: Option<f64>) -> Self {
        SceneDoc {
            meta: SceneMeta {
                alpha: alpha.map(Num),
                a: Num(scene.a),
                b: Num(scene.b),
                n: scene.n,
                t_star: Num(scene.t_star),
                tool_version: TOOL_VERSION,
            },
            fence: scene.fence.iter().map(|p| nums([p.t, p.tau, p.y])).collect(),
            shadow_ty: scene.shadow_ty.iter().map(|&p| nums(p)).collect(),
            shadow_tau_y: scene.shadow_tau_y.iter().map(|&p| nums(p)).collect(),
            tangents: scene.tangents.iter().map(TangentDoc::from).collect(),
        }
    }
}

#[derive(Serialize)]
struct AnimationMeta {
    alpha: Num,
    a: Num,
    b: Num,
    frames: usize,
    n: usize,
    tool_version: &'static str,
}

#[derive(Serialize)]
struct FrameDoc {
    frame: usize,
    t: Num,
    rl_value: Num,
    scene: SceneDoc,
}

#[derive(Serialize)]
struct AnimationDoc {
    meta: AnimationMeta,
    frames: Vec<FrameDoc>,
}

/// Scene document; `alpha` is recorded when the scene comes from a fractional integral.
pub fn scene_to_json(scene: &FenceScene, alpha: Option<f64>) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&SceneDoc::new(scene, alpha))?;
    s.push('\n');
    Ok(s)
}

pub fn animation_to_json(anim: &FenceAnimation) -> serde_json::Result<String> {
    let alpha = anim.alpha.get();
    let doc = AnimationDoc {
        meta: AnimationMeta {
            alpha: Num(alpha),
            a: Num(anim.a),
            b: Num(anim.b),
            frames: anim.frames.len(),
            n: anim.frames.first().map_or(0, |f| f.scene.n),
            tool_version: TOOL_VERSION,
        },
        frames: anim
            .frames
            .iter()
            .enumerate()
            .map(|(i, f)| FrameDoc {
                frame: i,
                t: Num(f.t),
                rl_value: Num(f.rl.value),
                scene: SceneDoc::new(&f.scene, Some(alpha)),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}
