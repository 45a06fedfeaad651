//! Synthetic animation fixtures used by the tests and the `fixture` command.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use elastica_core::lie::exp;
use elastica_core::{resample, AlgVec3, DiscreteCurve, ProdRot, Reparam};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anim::{curve_to_animation, Animation, Joint, Skeleton};

pub const FPS: f64 = 30.0;

fn sampled(n: usize, f: impl Fn(f64) -> Vec<AlgVec3>) -> DiscreteCurve {
    let points = (0..=n).map(|i| ProdRot(f(i as f64 / n as f64).into_iter().map(exp).collect())).collect();
    DiscreteCurve::uniform(points).expect("uniform grid")
}

fn single(c: &DiscreteCurve) -> Animation {
    curve_to_animation(c, &Skeleton::single("root"), FPS, None).expect("fixture curve converts")
}

/// Open spiral in exponential coordinates: `exp(ρ(t)(cos 2πt, sin 2πt, 0) + (0, 0, t/10))`
/// with `ρ(t) = 0.6 + 0.3t`. Its endpoint misses the start by about 0.3 rad.
pub fn spiral_curve(n: usize) -> DiscreteCurve {
    sampled(n, |t| {
        let rho = 0.6 + 0.3 * t;
        vec![AlgVec3::new(rho * (TAU * t).cos(), rho * (TAU * t).sin(), 0.1 * t)]
    })
}

/// `exp(t (0, 0, π/2))`.
pub fn quarter_turn_curve(n: usize) -> DiscreteCurve {
    sampled(n, |t| vec![AlgVec3::new(0.0, 0.0, FRAC_PI_2 * t)])
}

/// Time warp applied to the second curve of [`pair_curves`].
pub fn pair_warp() -> Reparam {
    Reparam::from_fn(64, |t| t + 0.5 * (TAU * t).sin() / TAU).expect("monotone warp")
}

/// Two similar single-joint curves, the second one traversed with a
/// nonuniform speed.
pub fn pair_curves(n: usize) -> (DiscreteCurve, DiscreteCurve) {
    let a = sampled(n, |t| vec![AlgVec3::new(0.9 * (PI * t).sin(), 0.4 * (1.0 - (PI * t).cos()), 1.2 * t)]);
    let b = sampled(n, |t| vec![AlgVec3::new(0.7 * (PI * t).sin() + 0.2 * t, 0.6 * (1.0 - (PI * t).cos()), 1.4 * t - 0.2 * t * t)]);
    let b = resample(&b, &pair_warp()).expect("warp resamples");
    (a, b)
}

pub fn spiral(frames: usize) -> Animation {
    single(&spiral_curve(frames - 1))
}

pub fn quarter_turn(frames: usize) -> Animation {
    single(&quarter_turn_curve(frames - 1))
}

pub fn pair(frames: usize) -> (Animation, Animation) {
    let (a, b) = pair_curves(frames - 1);
    (single(&a), single(&b))
}

/// Seeded random chain skeleton with smooth joint motion and a linear root
/// translation.
pub fn random(seed: u64, joints: usize, frames: usize) -> Animation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vec3 = |rng: &mut ChaCha8Rng, s: f64| AlgVec3::new(rng.gen_range(-s..s), rng.gen_range(-s..s), rng.gen_range(-s..s));
    let skeleton_joints: Vec<Joint> = (0..joints)
        .map(|k| Joint {
            name: if k == 0 { "root".into() } else { format!("joint{k}") },
            parent: if k == 0 { None } else { Some(rng.gen_range(0..k)) },
            offset: if k == 0 { [0.0; 3] } else { [rng.gen_range(-0.2..0.2), rng.gen_range(0.1..0.4), rng.gen_range(-0.2..0.2)] },
        })
        .collect();
    let coeffs: Vec<[AlgVec3; 3]> = (0..joints).map(|_| [vec3(&mut rng, 1.0), vec3(&mut rng, 0.4), vec3(&mut rng, 0.8)]).collect();
    let curve = sampled(frames - 1, |t| coeffs.iter().map(|c| c[0] * t + c[1] * (4.0 * t).sin() + c[2]).collect());
    let step = [rng.gen_range(-1.0..1.0), 0.0, rng.gen_range(-1.0..1.0)];
    let translation = (0..frames).map(|i| {
        let t = i as f64 / (frames - 1) as f64;
        [step[0] * t, 1.0, step[2] * t]
    });
    let skeleton = Skeleton::new(skeleton_joints).expect("generated skeleton is valid");
    curve_to_animation(&curve, &skeleton, FPS, Some(translation.collect())).expect("fixture converts")
}
