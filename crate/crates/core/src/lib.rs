//! Elastic shape analysis for discrete curves on `SO(3)` and `SO(3)^d`.
//!
//! The crate is `no_std` (it needs `alloc`). Curves are sampled on a grid of
//! `[0, 1]` and interpreted piecewise-geodesically. The main entry points:
//!
//! - [`lie`]: exp/log, adjoints, `dexp`/`dexpinv` on `so(3)` and products.
//! - [`curve`]: discrete curves, the square-root-velocity transform and its
//!   inverse, reparametrizations and geodesic resampling.
//! - [`metric`]: L² distances, SRV interpolation and the pullback elastic metric.
//! - [`matching`]: dynamic-programming minimization over warps.
//! - [`closing`]: gradient flow that drives a curve's endpoint to the identity.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod closing;
pub mod curve;
pub mod lie;
pub mod matching;
pub mod metric;

pub use closing::{close_curve, closing_gradient, endpoint, phi_functional, ClosingOptions, ClosingReport, GradientMode};
pub use curve::{base_at_identity, evaluate, regrid, resample, srvt, srvt_inverse, CellField, DiscreteCurve, NodeField, Reparam, SrvCurve, TangentField};
pub use error::{Error, Result};
pub use lie::{AlgVec3, Mat3, ProdAlg, ProdRot, Rot3};
pub use matching::{dp_match, shape_distance, shape_distance_symmetric, warp_cost, DpConfig, MatchResult, SlopeSet};
pub use metric::{curve_distance, interpolate, l2_distance, pullback_metric, srvt_tangent, tangent_log_derivative};
