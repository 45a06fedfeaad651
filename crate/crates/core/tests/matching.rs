mod common;

use common::{random_curve, rng};
use elastica_core::matching::{dp_match_srv, edge_cost};
use elastica_core::{
    curve_distance, dp_match, resample, shape_distance, shape_distance_symmetric, srvt, warp_cost, DpConfig, Reparam,
    SlopeSet, SrvCurve,
};
use proptest::prelude::*;

fn enumerate(q0: &SrvCurve, q1: &SrvCurve, steps: &[(usize, usize)], at: (usize, usize), acc: f64, n: usize, best: &mut f64) {
    if at == (n, n) {
        *best = best.min(acc);
        return;
    }
    for &(a, b) in steps {
        let next = (at.0 + a, at.1 + b);
        if next.0 <= n && next.1 <= n {
            enumerate(q0, q1, steps, next, acc + edge_cost(q0, q1, at, next), n, best);
        }
    }
}

#[test]
fn dp_equals_exhaustive_enumeration() {
    let config = DpConfig { slopes: SlopeSet::small(), window: None };
    for seed in 0..50 {
        let mut r = rng(1000 + seed);
        let q0 = srvt(&random_curve(&mut r, 12, 1 + (seed as usize % 3))).unwrap();
        let q1 = srvt(&random_curve(&mut r, 12, 1 + (seed as usize % 3))).unwrap();
        let m = dp_match_srv(&q0, &q1, &config).unwrap();
        let mut best = f64::INFINITY;
        enumerate(&q0, &q1, config.slopes.steps(), (0, 0), 0.0, 12, &mut best);
        assert_eq!(m.cost, best, "seed {seed}");
        let recomputed = warp_cost(&q0, &q1, &m.phi).unwrap();
        assert!((recomputed - m.cost).abs() <= 1e-12 * m.cost.max(1e-300));
    }
}

/// Warp through lattice nodes of the uniform grid, built from runs of steps.
fn lattice_warp(n: usize, runs: &[((usize, usize), usize)]) -> Reparam {
    let mut at = (0, 0);
    let mut knots = vec![(0.0, 0.0)];
    for &((a, b), count) in runs {
        at = (at.0 + a * count, at.1 + b * count);
        knots.push((at.0 as f64 / n as f64, at.1 as f64 / n as f64));
    }
    assert_eq!(at, (n, n));
    Reparam::new(knots).unwrap()
}

#[test]
fn matching_recovers_a_lattice_warp() {
    let phi = lattice_warp(200, &[((1, 2), 30), ((2, 1), 60), ((1, 2), 30), ((1, 1), 20)]);
    for seed in 0..3 {
        let mut r = rng(2000 + seed);
        let c = random_curve(&mut r, 200, 2);
        let warped = resample(&c, &phi).unwrap();
        let elastic = shape_distance(&c, &warped).unwrap();
        let plain = curve_distance(&c, &warped).unwrap();
        assert!(elastic < 0.05 * plain, "{elastic} vs {plain}");
    }
}

#[test]
fn symmetric_distance_is_symmetric() {
    let mut r = rng(3);
    let a = random_curve(&mut r, 30, 1);
    let b = random_curve(&mut r, 30, 1);
    let cfg = DpConfig::default();
    assert_eq!(shape_distance_symmetric(&a, &b, &cfg).unwrap(), shape_distance_symmetric(&b, &a, &cfg).unwrap());
}

#[test]
fn grids_must_agree() {
    let mut r = rng(4);
    let a = random_curve(&mut r, 30, 1);
    let b = random_curve(&mut r, 31, 1);
    assert!(dp_match(&a, &b, &DpConfig::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dp_is_monotone_in_the_search_space(seed in 0u64..10_000, n in 4usize..24) {
        let mut r = rng(seed);
        let q0 = srvt(&random_curve(&mut r, n, 1)).unwrap();
        let q1 = srvt(&random_curve(&mut r, n, 1)).unwrap();
        let identity = warp_cost(&q0, &q1, &Reparam::identity()).unwrap();
        let small = dp_match_srv(&q0, &q1, &DpConfig { slopes: SlopeSet::small(), window: None }).unwrap();
        let full = dp_match_srv(&q0, &q1, &DpConfig::default()).unwrap();
        let banded = dp_match_srv(&q0, &q1, &DpConfig { window: Some(2), ..DpConfig::default() }).unwrap();
        prop_assert!(small.cost <= identity * (1.0 + 1e-12));
        prop_assert!(full.cost <= small.cost);
        prop_assert!(full.cost <= banded.cost);
        prop_assert_eq!(&full.path[0], &(0, 0));
        prop_assert_eq!(full.path[full.path.len() - 1], (n, n));
    }
}

