use std::f64::consts::PI;

use proptest::prelude::*;
use whichpath::environment::MAX_QUBITS;
use whichpath::{
    apply_common_unitary, apply_recorder, branch_overlap_after_recording, initial_env,
    overlap_env, CommonUnitarySpec, Complex64, EnvironmentState, PathLabel, RecorderSpec,
};

/// Product state built by explicit Kronecker products of single-qubit vectors.
fn kron_product(qubits: &[[f64; 2]]) -> Vec<f64> {
    let mut out = vec![1.0];
    // qubit k is bit k of the basis index, so later qubits are more significant
    for q in qubits {
        let mut next = Vec::with_capacity(out.len() * 2);
        for bit in q {
            for v in &out {
                next.push(bit * v);
            }
        }
        out = next;
    }
    out
}

fn bruteforce_overlap(m: usize, theta: f64) -> f64 {
    let unrecorded = kron_product(&vec![[1.0, 0.0]; m]);
    let recorded = kron_product(&vec![[(theta / 2.0).cos(), (theta / 2.0).sin()]; m]);
    unrecorded.iter().zip(&recorded).map(|(a, b)| a * b).sum()
}

#[test]
fn small_kick_on_ten_qubits() {
    let spec = RecorderSpec::new(10, 0.1).unwrap();
    let gamma = branch_overlap_after_recording(&spec).unwrap();
    let oracle = bruteforce_overlap(10, 0.1);
    assert!((oracle - 0.05f64.cos().powi(10)).abs() < 1e-14);
    assert!((gamma.re - oracle).abs() < 1e-12 && gamma.im.abs() < 1e-15);
}

#[test]
fn quarter_overlap_explicit_amplitudes() {
    let spec = RecorderSpec::new(4, PI / 2.0).unwrap();
    let recorded = apply_recorder(&initial_env(4).unwrap(), &spec, PathLabel::B).unwrap();
    // every amplitude of the rotated register is (1/sqrt 2)^4 = 0.25
    for a in recorded.amplitudes() {
        assert!((a.re - 0.25).abs() < 1e-15 && a.im == 0.0);
    }
    let oracle = kron_product(&[[0.5f64.sqrt(), 0.5f64.sqrt()]; 4]);
    for (a, o) in recorded.amplitudes().iter().zip(&oracle) {
        assert!((a.re - o).abs() < 1e-15);
    }
    let gamma = overlap_env(&initial_env(4).unwrap(), &recorded).unwrap();
    assert!((gamma.re - 0.25).abs() < 1e-12);
    assert!((branch_overlap_after_recording(&spec).unwrap().re - 0.25).abs() < 1e-12);
}

#[test]
fn largest_register_is_normalized() {
    let env = initial_env(MAX_QUBITS).unwrap();
    assert_eq!(env.dim(), 1_048_576);
    let norm2: f64 = env.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    assert!((norm2 - 1.0).abs() < 1e-15);
}

#[test]
fn exponential_decoherence_law() {
    let theta = 0.2;
    let points: Vec<(f64, f64)> = (1..=12)
        .map(|m| {
            let g = branch_overlap_after_recording(&RecorderSpec::new(m, theta).unwrap()).unwrap();
            (m as f64, g.norm().ln())
        })
        .collect();
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = points.iter().map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    assert!((slope - (theta / 2.0).cos().ln()).abs() < 1e-12);
    assert!(residual < 1e-9);
}

#[test]
fn decoherence_is_monotone() {
    for theta in [0.05, 0.3, 1.0, 2.0, PI] {
        let mut prev = f64::INFINITY;
        for m in 0..=12 {
            let g = branch_overlap_after_recording(&RecorderSpec::new(m, theta).unwrap()).unwrap().norm();
            assert!(g <= prev + 1e-15, "theta {theta}, M {m}");
            prev = g;
        }
    }
    for m in 1..=8 {
        let mut prev = f64::INFINITY;
        for i in 0..=64 {
            let theta = PI * i as f64 / 64.0;
            let g = branch_overlap_after_recording(&RecorderSpec::new(m, theta).unwrap()).unwrap().norm();
            assert!(g <= prev + 1e-15, "theta {theta}, M {m}");
            prev = g;
        }
    }
}

fn random_register(m: usize) -> impl Strategy<Value = EnvironmentState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << m).prop_filter_map("zero", |v| {
        EnvironmentState::from_amplitudes(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
            .ok()?
            .normalize()
            .ok()
    })
}

fn common_unitary(m: usize) -> impl Strategy<Value = CommonUnitarySpec> {
    (
        prop::collection::vec(-4.0f64..4.0, m),
        prop::collection::vec(-4.0f64..4.0, m),
        0.0f64..3.0,
    )
        .prop_map(|(p, x, t)| CommonUnitarySpec::phases(p, t).with_mixing(x))
}

proptest! {
    #[test]
    fn recorder_is_unitary(env in random_register(5), theta in 0.0f64..=PI, on_a in any::<bool>()) {
        let path = if on_a { PathLabel::A } else { PathLabel::B };
        let spec = RecorderSpec::recording_on(5, theta, path).unwrap();
        let out = apply_recorder(&env, &spec, path).unwrap();
        prop_assert!((out.norm() - env.norm()).abs() < 1e-12);
    }

    #[test]
    fn common_unitary_preserves_overlap(
        (a, b, u) in (1usize..=6).prop_flat_map(|m| (random_register(m), random_register(m), common_unitary(m)))
    ) {
        let before = overlap_env(&a, &b).unwrap();
        let ua = apply_common_unitary(&a, &u).unwrap();
        let ub = apply_common_unitary(&b, &u).unwrap();
        prop_assert!((ua.norm() - 1.0).abs() < 1e-12);
        prop_assert!((overlap_env(&ua, &ub).unwrap() - before).norm() < 1e-12);
    }

    #[test]
    fn recorded_branches_keep_overlap_under_common_dynamics(
        (theta, u) in (0.0f64..=PI, common_unitary(4))
    ) {
        let spec = RecorderSpec::new(4, theta).unwrap();
        let env = initial_env(4).unwrap();
        let a = apply_recorder(&env, &spec, PathLabel::A).unwrap();
        let b = apply_recorder(&env, &spec, PathLabel::B).unwrap();
        let before = overlap_env(&a, &b).unwrap();
        let after = overlap_env(&apply_common_unitary(&a, &u).unwrap(), &apply_common_unitary(&b, &u).unwrap()).unwrap();
        prop_assert!((after - before).norm() < 1e-12);
        prop_assert!((before.re - spec.predicted_overlap()).abs() < 1e-12);
    }
}
