use std::f64::consts::{FRAC_PI_2, PI};

use elastica::anim::{canonical_quat, quat_distance, repair_quat};
use elastica::fixtures;
use elastica::{
    animation_to_curve, curve_to_animation, forward_kinematics, load_animation, quat_to_rot, rot_to_quat, save_animation,
    trace_vectors, AppError, Animation, Joint, Skeleton,
};
use elastica_core::lie::exp;
use elastica_core::{srvt, AlgVec3, DiscreteCurve, ProdRot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn two_joint_fixture() -> Animation {
    let skeleton = Skeleton::new(vec![
        Joint { name: "hip".into(), parent: None, offset: [0.0, 0.0, 0.0] },
        Joint { name: "knee".into(), parent: Some(0), offset: [0.0, -0.4, 0.0] },
    ])
    .unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let frames = vec![vec![[1.0, 0.0, 0.0, 0.0], [h, 0.0, h, 0.0]], vec![[0.6, 0.8, 0.0, 0.0], [-0.5, 0.5, 0.5, 0.5]]];
    Animation::new(skeleton, 24.0, frames, Some(vec![[0.0, 1.0, 0.0], [0.1, 1.0, 0.0]])).unwrap()
}

#[test]
fn save_load_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let original = two_joint_fixture();
    save_animation(&original, &path).unwrap();
    let loaded = load_animation(&path).unwrap();
    assert_eq!(loaded, original);
    let bytes = std::fs::read(&path).unwrap();
    save_animation(&loaded, &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
    // stored quaternions are in canonical sign
    assert!(loaded.frames[1][1][0] > 0.0);
}

#[test]
fn random_animation_roundtrips_through_text() {
    let a = fixtures::random(9, 5, 30);
    let b = Animation::from_json_str(&a.to_json_string(), "mem").unwrap();
    assert_eq!(a, b);
}

fn doc(frames: &str) -> String {
    format!(r#"{{"fps": 30, "skeleton": [{{"name": "root", "parent": null, "offset": [0, 0, 0]}}], "frames": {frames}}}"#)
}

#[test]
fn slightly_off_quaternions_are_repaired() {
    let a = Animation::from_json_str(&doc("[[[1.0005, 0, 0, 0]], [[0, 0, 0, -1.0002]]]"), "mem").unwrap();
    assert_eq!(a.frames[0][0], [1.0, 0.0, 0.0, 0.0]);
    assert_eq!(a.frames[1][0], [0.0, 0.0, 0.0, 1.0]);
    let err = Animation::from_json_str(&doc("[[[1.01, 0, 0, 0]], [[1, 0, 0, 0]]]"), "mem").unwrap_err();
    assert!(matches!(err, AppError::Schema(_)));
}

#[test]
fn schema_and_parse_errors_are_distinguished() {
    let wrong_count = r#"{"fps": 30, "skeleton": [{"name": "a", "parent": null, "offset": [0,0,0]}, {"name": "b", "parent": 0, "offset": [0,1,0]}],
        "frames": [[[1,0,0,0],[1,0,0,0]], [[1,0,0,0]]]}"#;
    assert!(matches!(Animation::from_json_str(wrong_count, "mem"), Err(AppError::Schema(m)) if m.contains("frame 1")));
    let missing = r#"{"skeleton": [], "frames": []}"#;
    assert!(matches!(Animation::from_json_str(missing, "mem"), Err(AppError::Schema(m)) if m.contains("fps")));
    let broken = "{\"fps\": 30,\n  \"skeleton\": [}";
    match Animation::from_json_str(broken, "mem") {
        Err(AppError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(Animation::from_json_str(&doc("[[[1,0,0,0]]]"), "mem"), Err(AppError::Schema(_))));
}

#[test]
fn skeleton_invariants() {
    let j = |name: &str, parent| Joint { name: name.into(), parent, offset: [0.0; 3] };
    assert!(Skeleton::new(vec![j("a", None), j("b", None)]).is_err());
    assert!(Skeleton::new(vec![j("a", Some(1)), j("b", None)]).is_err());
    assert!(Skeleton::new(vec![j("a", None), j("a", Some(0))]).is_err());
    assert!(Skeleton::new(vec![j("a", None), j("b", Some(0))]).is_ok());
}

#[test]
fn quaternion_matrix_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let mut q: [f64; 4] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        q = canonical_quat(q.map(|c| c / n));
        let back = rot_to_quat(&quat_to_rot(q));
        for k in 0..4 {
            assert!((back[k] - q[k]).abs() < 1e-12);
        }
    }
    assert_eq!(repair_quat([-1.0, 0.0, 0.0, 0.0]).unwrap(), [1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn quarter_turn_animation_is_a_subgroup() {
    let anim = fixtures::quarter_turn(11);
    let c = animation_to_curve(&anim).unwrap();
    for (i, p) in c.points().iter().enumerate() {
        let expected = exp(AlgVec3::new(0.0, 0.0, FRAC_PI_2 * i as f64 / 10.0));
        assert!(p[0].distance(&expected) < 1e-10);
    }
}

#[test]
fn curve_animation_roundtrip() {
    let anim = fixtures::random(4, 3, 25);
    let back = curve_to_animation(&animation_to_curve(&anim).unwrap(), &anim.skeleton, anim.fps, anim.root_translation.clone()).unwrap();
    assert_eq!(back.root_translation, anim.root_translation);
    for (fa, fb) in anim.frames.iter().zip(&back.frames) {
        for (a, b) in fa.iter().zip(fb) {
            assert!(quat_distance(*a, *b) < 1e-9);
        }
    }
}

#[test]
fn constant_pose_is_degenerate() {
    let frames = vec![vec![[1.0, 0.0, 0.0, 0.0]]; 5];
    let anim = Animation::new(Skeleton::single("root"), 30.0, frames, None).unwrap();
    let c = animation_to_curve(&anim).unwrap();
    assert!(srvt(&c).is_err());
}

fn chain() -> Skeleton {
    Skeleton::new(vec![
        Joint { name: "root".into(), parent: None, offset: [0.0; 3] },
        Joint { name: "mid".into(), parent: Some(0), offset: [1.0, 0.0, 0.0] },
        Joint { name: "tip".into(), parent: Some(1), offset: [1.0, 0.0, 0.0] },
    ])
    .unwrap()
}

#[test]
fn forward_kinematics_examples() {
    let id = [1.0, 0.0, 0.0, 0.0];
    let sk = chain();
    assert_eq!(forward_kinematics(&sk, &[id; 3], None).unwrap(), vec![[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]);
    let quarter_z = rot_to_quat(&exp(AlgVec3::new(0.0, 0.0, FRAC_PI_2)));
    let p = forward_kinematics(&sk, &[quarter_z, id, id], None).unwrap();
    for (got, want) in p[2].iter().zip([0.0, 2.0, 0.0]) {
        assert!((got - want).abs() < 1e-15);
    }
    let shifted = forward_kinematics(&sk, &[quarter_z, id, id], Some([0.0, 0.0, 5.0])).unwrap();
    for (a, b) in p.iter().zip(&shifted) {
        assert!((b[2] - a[2] - 5.0).abs() < 1e-15 && a[0] == b[0] && a[1] == b[1]);
    }
    assert!(forward_kinematics(&sk, &[id; 2], None).is_err());
}

#[test]
fn forward_kinematics_is_equivariant_under_root_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let anim = fixtures::random(6, 5, 4);
    let g = exp(AlgVec3::new(rng.gen_range(-1.0..1.0), 0.3, -0.8));
    let frame = &anim.frames[2];
    let base = forward_kinematics(&anim.skeleton, frame, None).unwrap();
    let mut rotated = frame.clone();
    rotated[0] = rot_to_quat(&(g * quat_to_rot(frame[0])));
    let turned = forward_kinematics(&anim.skeleton, &rotated, None).unwrap();
    for (a, b) in base.iter().zip(&turned) {
        let ga = g.apply(AlgVec3::from_array(*a));
        assert!((ga - AlgVec3::from_array(*b)).norm() < 1e-12);
    }
}

#[test]
fn trace_examples() {
    let constant = DiscreteCurve::uniform(vec![ProdRot(vec![exp(AlgVec3::new(0.3, 0.2, 0.1))]); 4]).unwrap();
    let t = trace_vectors(&constant, &[[0.0, 1.0, 0.0]], 5).unwrap();
    let want = constant.points()[0][0].apply(AlgVec3::new(0.0, 1.0, 0.0)).to_array();
    assert!(t[0].samples.iter().all(|(_, p)| *p == want));

    let half = DiscreteCurve::uniform((0..=20).map(|i| ProdRot(vec![exp(AlgVec3::new(0.0, 0.0, PI * i as f64 / 20.0))])).collect()).unwrap();
    let t = trace_vectors(&half, &[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]], 33).unwrap();
    assert_eq!(t.len(), 2);
    for (s, p) in &t[0].samples {
        assert!((p[0] - (PI * s).cos()).abs() < 1e-12 && (p[1] - (PI * s).sin()).abs() < 1e-12 && p[2].abs() < 1e-15);
        assert!(((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() - 1.0).abs() < 1e-12);
    }
    assert!(trace_vectors(&half, &[[1.0, 0.0, 0.0]], 1).is_err());
    let csv = t[0].to_csv();
    assert!(csv.starts_with("t,x,y,z\n0.0000000000000000e0,1.0000000000000000e0,"));
    assert_eq!(csv.lines().count(), 34);
}
