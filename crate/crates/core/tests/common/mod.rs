#![allow(dead_code)]

use elastica_core::lie::exp;
use elastica_core::{AlgVec3, DiscreteCurve, ProdAlg, ProdRot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, scale: f64) -> AlgVec3 {
    AlgVec3::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Smooth random curve `exp(a(t)) g` with a low-frequency trigonometric `a`
/// per component.
pub fn random_curve(rng: &mut impl Rng, n: usize, d: usize) -> DiscreteCurve {
    let coeffs: Vec<[AlgVec3; 4]> =
        (0..d).map(|_| [random_vec(rng, 1.0), random_vec(rng, 0.5), random_vec(rng, 0.5), random_vec(rng, 0.3)]).collect();
    let base: Vec<_> = (0..d).map(|_| exp(random_vec(rng, 1.5))).collect();
    let points = (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            ProdRot(
                coeffs
                    .iter()
                    .zip(&base)
                    .map(|(c, g)| {
                        let a = c[0] * t + c[1] * (3.0 * t).sin() + c[2] * (2.0 * t).cos() + c[3] * (5.0 * t).sin();
                        exp(a) * *g
                    })
                    .collect(),
            )
        })
        .collect();
    DiscreteCurve::uniform(points).unwrap()
}

pub fn random_field(rng: &mut impl Rng, n: usize, d: usize) -> Vec<ProdAlg> {
    (0..n).map(|_| ProdAlg((0..d).map(|_| random_vec(rng, 1.0)).collect())).collect()
}
