//! Animation files, fixtures and the command-line front end for elastic
//! curve analysis on `SO(3)^d`. The numerics live in `elastica_core`.

pub mod anim;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod output;
pub mod trace;

pub use anim::{
    animation_to_curve, curve_to_animation, forward_kinematics, load_animation, quat_to_rot, rot_to_quat, save_animation, Animation,
    Joint, Quat, Skeleton,
};
pub use error::{AppError, AppResult};
pub use trace::{trace_vectors, Trajectory};
