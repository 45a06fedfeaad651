//! Skeletal animations: joint hierarchy, per-joint quaternion frames, the JSON
//! file format and conversion to curves on `SO(3)^d`.

use std::path::Path;

use elastica_core::{DiscreteCurve, Mat3, ProdRot, Rot3};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};
use crate::output::write_atomic;

/// Quaternions whose norm deviates from 1 by more than this are rejected.
pub const QUATERNION_REPAIR_BAND: f64 = 1e-3;

/// Unit quaternion `(w, x, y, z)`.
pub type Quat = [f64; 4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub name: String,
    #[serde(default)]
    pub parent: Option<usize>,
    pub offset: [f64; 3],
}

/// Rooted joint tree in topological order.
#[derive(Clone, Debug, PartialEq)]
pub struct Skeleton {
    joints: Vec<Joint>,
}

impl Skeleton {
    pub fn new(joints: Vec<Joint>) -> AppResult<Self> {
        if joints.is_empty() {
            return Err(AppError::Schema("skeleton has no joints".into()));
        }
        let roots = joints.iter().filter(|j| j.parent.is_none()).count();
        if roots != 1 {
            return Err(AppError::Schema(format!("skeleton must have exactly one root, found {roots}")));
        }
        for (i, j) in joints.iter().enumerate() {
            if let Some(p) = j.parent {
                if p >= i {
                    return Err(AppError::Schema(format!("joint '{}' (index {i}) has parent {p}, parents must precede children", j.name)));
                }
            }
            if joints[..i].iter().any(|k| k.name == j.name) {
                return Err(AppError::Schema(format!("duplicate joint name '{}'", j.name)));
            }
            if j.offset.iter().any(|x| !x.is_finite()) {
                return Err(AppError::Schema(format!("joint '{}' has a non-finite offset", j.name)));
            }
        }
        Ok(Skeleton { joints })
    }

    /// A single root joint with zero offset.
    pub fn single(name: &str) -> Self {
        Skeleton { joints: vec![Joint { name: name.into(), parent: None, offset: [0.0; 3] }] }
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.joints.iter().position(|j| j.name == name)
    }
}

/// Animation clip: per-frame local joint rotations plus an optional root
/// translation channel that is carried along untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct Animation {
    pub skeleton: Skeleton,
    pub fps: f64,
    pub frames: Vec<Vec<Quat>>,
    pub root_translation: Option<Vec<[f64; 3]>>,
}

#[derive(Serialize, Deserialize)]
struct RawAnimation {
    fps: f64,
    skeleton: Vec<Joint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root_translation: Option<Vec<[f64; 3]>>,
    frames: Vec<Vec<Quat>>,
}

/// Flip to the hemisphere `w > 0` (ties broken by the first nonzero entry).
pub fn canonical_quat(q: Quat) -> Quat {
    let flip = q.iter().find(|&&c| c != 0.0).is_some_and(|&c| c < 0.0);
    if flip {
        [-q[0], -q[1], -q[2], -q[3]]
    } else {
        q
    }
}

/// Renormalize a nearly unit quaternion and canonicalize its sign. Exactly
/// normalized input (to a few ulps) is passed through bit-for-bit.
pub fn repair_quat(q: Quat) -> Result<Quat, String> {
    let n2: f64 = q.iter().map(|c| c * c).sum();
    if !n2.is_finite() {
        return Err("quaternion has non-finite entries".into());
    }
    let norm = n2.sqrt();
    if (norm - 1.0).abs() > QUATERNION_REPAIR_BAND {
        return Err(format!("quaternion norm {norm} outside the repair band"));
    }
    let q = if (n2 - 1.0).abs() > 4.0 * f64::EPSILON { q.map(|c| c / norm) } else { q };
    Ok(canonical_quat(q))
}

pub fn quat_to_rot(q: Quat) -> Rot3 {
    let [w, x, y, z] = q;
    let m = Mat3([
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]);
    Rot3::from_matrix(m).expect("unit quaternion yields a rotation")
}

/// Rotation matrix to canonical unit quaternion (Shepperd's method).
pub fn rot_to_quat(r: &Rot3) -> Quat {
    let m = &r.matrix().0;
    let tr = m[0][0] + m[1][1] + m[2][2];
    let q = if tr > m[0][0].max(m[1][1]).max(m[2][2]) {
        let s = 2.0 * (1.0 + tr).sqrt();
        [0.25 * s, (m[2][1] - m[1][2]) / s, (m[0][2] - m[2][0]) / s, (m[1][0] - m[0][1]) / s]
    } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
        let s = 2.0 * (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt();
        [(m[2][1] - m[1][2]) / s, 0.25 * s, (m[0][1] + m[1][0]) / s, (m[0][2] + m[2][0]) / s]
    } else if m[1][1] >= m[2][2] {
        let s = 2.0 * (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt();
        [(m[0][2] - m[2][0]) / s, (m[0][1] + m[1][0]) / s, 0.25 * s, (m[1][2] + m[2][1]) / s]
    } else {
        let s = 2.0 * (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt();
        [(m[1][0] - m[0][1]) / s, (m[0][2] + m[2][0]) / s, (m[1][2] + m[2][1]) / s, 0.25 * s]
    };
    let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
    canonical_quat(q.map(|c| c / n))
}

/// Angle between the rotations represented by two unit quaternions,
/// computed from the relative quaternion `conj(a) b`.
pub fn quat_distance(a: Quat, b: Quat) -> f64 {
    let [aw, ax, ay, az] = a;
    let [bw, bx, by, bz] = b;
    let w = aw * bw + ax * bx + ay * by + az * bz;
    let x = aw * bx - ax * bw - ay * bz + az * by;
    let y = aw * by + ax * bz - ay * bw - az * bx;
    let z = aw * bz - ax * by + ay * bx - az * bw;
    2.0 * (x * x + y * y + z * z).sqrt().atan2(w.abs())
}

impl Animation {
    /// Validate and canonicalize (quaternion repair, sign convention).
    pub fn new(skeleton: Skeleton, fps: f64, frames: Vec<Vec<Quat>>, root_translation: Option<Vec<[f64; 3]>>) -> AppResult<Self> {
        if !(fps > 0.0 && fps.is_finite()) {
            return Err(AppError::Schema(format!("fps must be positive, got {fps}")));
        }
        if frames.len() < 2 {
            return Err(AppError::Schema(format!("animation needs at least 2 frames, found {}", frames.len())));
        }
        let d = skeleton.len();
        let mut repaired = Vec::with_capacity(frames.len());
        for (f, frame) in frames.into_iter().enumerate() {
            if frame.len() != d {
                return Err(AppError::Schema(format!("frame {f} has {} joints, skeleton has {d}", frame.len())));
            }
            let frame = frame
                .into_iter()
                .enumerate()
                .map(|(k, q)| repair_quat(q).map_err(|m| AppError::Schema(format!("frame {f}, joint '{}': {m}", skeleton.joints[k].name))))
                .collect::<AppResult<Vec<Quat>>>()?;
            repaired.push(frame);
        }
        if let Some(t) = &root_translation {
            if t.len() != repaired.len() {
                return Err(AppError::Schema(format!("root_translation has {} entries for {} frames", t.len(), repaired.len())));
            }
            if t.iter().flatten().any(|x| !x.is_finite()) {
                return Err(AppError::Schema("root_translation has non-finite entries".into()));
            }
        }
        Ok(Animation { skeleton, fps, frames: repaired, root_translation })
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn from_json_str(text: &str, origin: &str) -> AppResult<Self> {
        let raw: RawAnimation = serde_json::from_str(text).map_err(|e| match e.classify() {
            serde_json::error::Category::Data => AppError::Schema(format!("{origin}:{}:{}: {e}", e.line(), e.column())),
            _ => AppError::Parse { origin: origin.into(), line: e.line(), column: e.column(), message: e.to_string() },
        })?;
        let with_origin = |e: AppError| match e {
            AppError::Schema(m) => AppError::Schema(format!("{origin}: {m}")),
            other => other,
        };
        let skeleton = Skeleton::new(raw.skeleton).map_err(with_origin)?;
        Animation::new(skeleton, raw.fps, raw.frames, raw.root_translation).map_err(with_origin)
    }

    /// Compact JSON, one frame per line.
    pub fn to_json_string(&self) -> String {
        let mut s = String::from("{\n");
        s.push_str(&format!("  \"fps\": {},\n", json(&self.fps)));
        s.push_str(&format!("  \"skeleton\": {},\n", json(&self.skeleton.joints[..])));
        if let Some(t) = &self.root_translation {
            s.push_str(&format!("  \"root_translation\": {},\n", json(&t[..])));
        }
        s.push_str("  \"frames\": [\n");
        for (i, frame) in self.frames.iter().enumerate() {
            let sep = if i + 1 < self.frames.len() { "," } else { "" };
            s.push_str(&format!("    {}{sep}\n", json(&frame[..])));
        }
        s.push_str("  ]\n}\n");
        s
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

pub fn load_animation(path: &Path) -> AppResult<Animation> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    Animation::from_json_str(&text, &path.display().to_string())
}

pub fn save_animation(anim: &Animation, path: &Path) -> AppResult<()> {
    write_atomic(path, anim.to_json_string().as_bytes())
}

/// Frames as a curve on `SO(3)^d` over the uniform grid `i / (frames - 1)`.
pub fn animation_to_curve(anim: &Animation) -> AppResult<DiscreteCurve> {
    let points = anim.frames.iter().map(|f| ProdRot(f.iter().map(|&q| quat_to_rot(q)).collect())).collect();
    DiscreteCurve::uniform(points).map_err(|e| AppError::numeric(e, Some(&anim.skeleton)))
}

/// Inverse of [`animation_to_curve`]; the root translation is reattached
/// unchanged.
pub fn curve_to_animation(
    c: &DiscreteCurve,
    skeleton: &Skeleton,
    fps: f64,
    root_translation: Option<Vec<[f64; 3]>>,
) -> AppResult<Animation> {
    if c.width() != skeleton.len() {
        return Err(AppError::Schema(format!("curve has {} components, skeleton has {} joints", c.width(), skeleton.len())));
    }
    let frames = c.points().iter().map(|p| p.parts().iter().map(rot_to_quat).collect()).collect();
    Animation::new(skeleton.clone(), fps, frames, root_translation)
}

/// Global joint positions for one frame of local rotations.
pub fn forward_kinematics(skeleton: &Skeleton, frame: &[Quat], root_translation: Option<[f64; 3]>) -> AppResult<Vec<[f64; 3]>> {
    if frame.len() != skeleton.len() {
        return Err(AppError::Schema(format!("frame has {} joints, skeleton has {}", frame.len(), skeleton.len())));
    }
    let mut global: Vec<Rot3> = Vec::with_capacity(frame.len());
    let mut positions: Vec<[f64; 3]> = Vec::with_capacity(frame.len());
    for (joint, &q) in skeleton.joints.iter().zip(frame) {
        let local = quat_to_rot(q);
        match joint.parent {
            None => {
                positions.push(root_translation.unwrap_or([0.0; 3]));
                global.push(local);
            }
            Some(p) => {
                let off = global[p].apply(elastica_core::AlgVec3::from_array(joint.offset)).to_array();
                let base = positions[p];
                positions.push([base[0] + off[0], base[1] + off[1], base[2] + off[2]]);
                global.push(global[p] * local);
            }
        }
    }
    Ok(positions)
}

/// Whether two skeletons can be blended frame against frame.
pub fn check_compatible(a: &Skeleton, b: &Skeleton) -> AppResult<()> {
    if a != b {
        return Err(AppError::Schema("skeletons differ (names, parents or offsets)".into()));
    }
    Ok(())
}
