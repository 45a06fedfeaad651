mod common;

use common::{random_curve, rng};
use elastica_core::{base_at_identity, curve_distance, resample, srvt, srvt_inverse, warp_cost, Reparam};

#[test]
fn inverse_recovers_identity_based_curve() {
    let mut r = rng(1);
    for &d in &[1, 3, 10] {
        for &n in &[8, 64, 256] {
            for _ in 0..4 {
                let c = random_curve(&mut r, n, d);
                let back = srvt_inverse(&srvt(&c).unwrap()).unwrap();
                assert!(back.max_distance(&base_at_identity(&c)).unwrap() < 1e-10);
            }
        }
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / lx.len() as f64, ly.iter().sum::<f64>() / ly.len() as f64);
    lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

#[test]
fn equivariance_defect_is_first_order() {
    let phi = Reparam::from_fn(4000, |t| t + 0.3 * t * (1.0 - t)).unwrap();
    let ns = [50usize, 100, 200, 400];
    let defects: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let mut r = rng(5);
            let c = random_curve(&mut r, n, 2);
            let q = srvt(&c).unwrap();
            let qr = srvt(&resample(&c, &phi).unwrap()).unwrap();
            warp_cost(&qr, &q, &phi).unwrap().sqrt()
        })
        .collect();
    let h: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    let s = slope(&h, &defects);
    assert!((0.8..=1.2).contains(&s), "slope {s}, defects {defects:?}");
}

#[test]
fn invariance_defect_vanishes_under_refinement() {
    let phi = Reparam::from_fn(4000, |t| t + 0.3 * t * (1.0 - t)).unwrap();
    let defects: Vec<f64> = [50usize, 100, 200, 400]
        .iter()
        .map(|&n| {
            let mut r = rng(6);
            let a = random_curve(&mut r, n, 1);
            let b = random_curve(&mut r, n, 1);
            let d0 = curve_distance(&a, &b).unwrap();
            let d1 = curve_distance(&resample(&a, &phi).unwrap(), &resample(&b, &phi).unwrap()).unwrap();
            (d1 - d0).abs()
        })
        .collect();
    assert!(defects.windows(2).all(|w| w[1] < 0.6 * w[0]), "{defects:?}");
}
