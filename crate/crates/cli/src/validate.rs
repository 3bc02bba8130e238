//! The invariant suite behind `whichpath validate`.
//!
//! Every check returns a non-negative residual that passes when it is at most
//! the stated tolerance. Randomized checks use fixed seeds, and the suite runs
//! sequentially so reports are reproducible.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whichpath::interference::DEFAULT_ENVELOPE_THRESHOLD;
use whichpath::propagation::harmonic_coherent_state;
use whichpath::{
    apply_common_unitary, apply_recorder, branch_overlap_after_recording, coherence_magnitude,
    com_decompose, distinguishability, free_gaussian_evolve, initial_env,
    joint_pattern_bruteforce, make_two_path_branches, measure_visibility, overlap_env, purity,
    reduced_rho_closed_form, reduced_rho_partial_trace, single_path_pattern, split_step,
    two_path_pattern, BranchState, CommonUnitarySpec, Complex64, EnvironmentState,
    GaussianPacketSpec, GridWavefunction, MassConfiguration, PathLabel, PotentialSpec,
    RecorderSpec, ReducedDensityMatrix2, SpatialGrid, SplitStepPropagator, TwoPathState,
    TwoSlitGeometry,
};

use crate::config::{ExperimentConfig, SweepConfig};
use crate::run::{pattern_csv, simulate, Summary};
use crate::sweep::{run_points, sweep_csv};

type Check = fn() -> Result<f64, String>;

pub struct Invariant {
    pub name: &'static str,
    pub tolerance: f64,
    check: Check,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub tolerance: f64,
    /// Measured residual, or the error that stopped the check.
    pub residual: Result<f64, String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        matches!(self.residual, Ok(r) if r <= self.tolerance)
    }

    pub fn report_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match &self.residual {
            Ok(r) => format!("{status} {:<40} residual {r:.3e} tolerance {:.1e}", self.name, self.tolerance),
            Err(e) => format!("{status} {:<40} error: {e}", self.name),
        }
    }
}

fn inv(name: &'static str, tolerance: f64, check: Check) -> Invariant {
    Invariant { name, tolerance, check }
}

pub fn invariants() -> Vec<Invariant> {
    vec![
        inv("core.overlap_conjugate_symmetry", 1e-15, overlap_conjugate_symmetry),
        inv("core.cauchy_schwarz", 1e-12, cauchy_schwarz),
        inv("core.com_reconstruction", 1e-12, com_reconstruction),
        inv("core.normalize_idempotent", 1e-12, normalize_idempotent),
        inv("environment.unitarity", 1e-12, unitarity),
        inv("environment.overlap_invariance", 1e-12, overlap_invariance),
        inv("environment.monotone_decoherence", 1e-15, monotone_decoherence),
        inv("environment.exponential_law", 1e-9, exponential_law),
        inv("propagation.free_packet_accuracy", 1e-6, free_packet_accuracy),
        inv("propagation.norm_conservation", 1e-12, norm_conservation),
        inv("propagation.momentum_conservation", 1e-9, momentum_conservation),
        inv("propagation.convergence_order", 0.2, convergence_order),
        inv("propagation.time_reversal", 1e-8, time_reversal),
        inv("propagation.harmonic_revival", 1e-4, harmonic_revival),
        inv("interference.oracle_equivalence", 1e-10, oracle_equivalence),
        inv("interference.decohered_convexity", 1e-12, decohered_convexity),
        inv("interference.visibility_law", 1e-2, visibility_law),
        inv("interference.complementarity_bound", 1e-6, complementarity_bound),
        inv("interference.complementarity_equality", 2e-2, complementarity_equality),
        inv("interference.pattern_normalization", 1e-9, pattern_normalization),
        inv("densmat.partial_trace_equivalence", 1e-12, partial_trace_equivalence),
        inv("densmat.matrix_validity", 1e-12, matrix_validity),
        inv("densmat.coherence_matches_visibility", 1e-2, coherence_matches_visibility),
        inv("densmat.idempotence_at_full_coherence", 1e-12, idempotence),
        inv("cli.determinism", 0.0, determinism),
        inv("cli.sweep_order_independence", 0.0, sweep_order_independence),
        inv("cli.strict_rejection", 0.0, strict_rejection),
    ]
}

pub fn names() -> Vec<&'static str> {
    invariants().iter().map(|i| i.name).collect()
}

/// Runs the suite. Invariants named in `corrupt` (or all of them for `"all"`)
/// get a negative tolerance so they cannot pass; this is the negative control.
pub fn run_suite(corrupt: Option<&str>, mut on_outcome: impl FnMut(&Outcome)) -> Vec<Outcome> {
    invariants()
        .into_iter()
        .map(|i| {
            let tolerance = match corrupt {
                Some(c) if c == "all" || c == i.name => -1.0,
                _ => i.tolerance,
            };
            let outcome = Outcome { name: i.name, tolerance, residual: (i.check)() };
            on_outcome(&outcome);
            outcome
        })
        .collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn random_env(rng: &mut ChaCha8Rng, m: usize) -> Result<EnvironmentState, String> {
    let amps = (0..1usize << m)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    EnvironmentState::from_amplitudes(amps).and_then(|e| e.normalize()).map_err(err)
}

fn random_common(rng: &mut ChaCha8Rng, m: usize) -> CommonUnitarySpec {
    CommonUnitarySpec::phases((0..m).map(|_| rng.gen_range(-3.0..3.0)).collect(), rng.gen_range(0.1..2.0))
        .with_mixing((0..m).map(|_| rng.gen_range(-3.0..3.0)).collect())
}

fn random_recorder(rng: &mut ChaCha8Rng, max_qubits: usize) -> Result<RecorderSpec, String> {
    let path = if rng.gen_bool(0.5) { PathLabel::A } else { PathLabel::B };
    RecorderSpec::recording_on(rng.gen_range(0..=max_qubits), rng.gen_range(0.0..=PI), path).map_err(err)
}

fn overlap_conjugate_symmetry() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.gen_range(0..=6);
        let (a, b) = (random_env(&mut rng, m)?, random_env(&mut rng, m)?);
        let d = overlap_env(&a, &b).map_err(err)? - overlap_env(&b, &a).map_err(err)?.conj();
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

fn cauchy_schwarz() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.gen_range(0..=6);
        let a = random_env(&mut rng, m)?;
        let b = if rng.gen_bool(0.2) { a.clone() } else { random_env(&mut rng, m)? };
        worst = worst.max(overlap_env(&a, &b).map_err(err)?.norm() - 1.0);
    }
    Ok(worst.max(0.0))
}

fn com_reconstruction() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let positions: Vec<[f64; 3]> = (0..n)
            .map(|_| [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)])
            .collect();
        let cfg = MassConfiguration::new(masses, positions.clone()).map_err(err)?;
        let rebuilt = com_decompose(&cfg).map_err(err)?.reconstruct();
        for (x, y) in positions.iter().zip(&rebuilt) {
            for k in 0..3 {
                worst = worst.max((x[k] - y[k]).abs());
            }
        }
    }
    Ok(worst)
}

fn normalize_idempotent() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let grid = SpatialGrid::new(-10.0, 10.0, 128).map_err(err)?;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let scale = rng.gen_range(0.01..100.0);
        let amps = (0..128).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale);
        let psi = GridWavefunction::new(grid, amps.collect()).map_err(err)?;
        let once = psi.normalize().map_err(err)?;
        let twice = once.normalize().map_err(err)?;
        for (a, b) in once.amplitudes().iter().zip(twice.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
        let m = rng.gen_range(0..=5);
        let env = random_env(&mut rng, m)?;
        let again = env.normalize().map_err(err)?;
        for (a, b) in env.amplitudes().iter().zip(again.amplitudes()) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

fn unitarity() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = rng.gen_range(0..=8);
        let env = random_env(&mut rng, m)?;
        let spec = RecorderSpec::new(m, rng.gen_range(0.0..=PI)).map_err(err)?;
        let recorded = apply_recorder(&env, &spec, PathLabel::B).map_err(err)?;
        let mixed = apply_common_unitary(&recorded, &random_common(&mut rng, m)).map_err(err)?;
        worst = worst.max((recorded.norm() - 1.0).abs()).max((mixed.norm() - 1.0).abs());
    }
    Ok(worst)
}

fn overlap_invariance() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = rng.gen_range(0..=7);
        let (a, b) = (random_env(&mut rng, m)?, random_env(&mut rng, m)?);
        let u = random_common(&mut rng, m);
        let before = overlap_env(&a, &b).map_err(err)?;
        let after = overlap_env(
            &apply_common_unitary(&a, &u).map_err(err)?,
            &apply_common_unitary(&b, &u).map_err(err)?,
        )
        .map_err(err)?;
        worst = worst.max((before - after).norm());
    }
    Ok(worst)
}

fn overlap_magnitude(m: usize, theta: f64) -> Result<f64, String> {
    let spec = RecorderSpec::new(m, theta).map_err(err)?;
    Ok(branch_overlap_after_recording(&spec).map_err(err)?.norm())
}

fn monotone_decoherence() -> Result<f64, String> {
    let mut worst = 0.0f64;
    for theta in [0.1, 0.5, 1.0, 2.0, PI] {
        let mut prev = overlap_magnitude(0, theta)?;
        for m in 1..=12 {
            let g = overlap_magnitude(m, theta)?;
            worst = worst.max(g - prev);
            prev = g;
        }
    }
    for m in [1, 3, 8] {
        let mut prev = overlap_magnitude(m, 0.0)?;
        for k in 1..=64 {
            let g = overlap_magnitude(m, PI * k as f64 / 64.0)?;
            worst = worst.max(g - prev);
            prev = g;
        }
    }
    Ok(worst.max(0.0))
}

fn exponential_law() -> Result<f64, String> {
    let theta = 0.2f64;
    let points = (1..=12usize)
        .map(|m| Ok((m as f64, overlap_magnitude(m, theta)?.ln())))
        .collect::<Result<Vec<_>, String>>()?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let fit = points.iter().map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Ok(fit.max((slope - (theta / 2.0).cos().ln()).abs()))
}

fn free_packet_accuracy() -> Result<f64, String> {
    let g = SpatialGrid::new(-40.0, 40.0, 1024).map_err(err)?;
    let spec = GaussianPacketSpec::new(-2.0, 1.0, 1.0).map_err(err)?;
    let psi0 = free_gaussian_evolve(&spec, 0.0, &g).map_err(err)?;
    let numeric = split_step(&psi0, &PotentialSpec::zero(&g), 1e-3, 1000).map_err(err)?;
    numeric.l2_distance(&free_gaussian_evolve(&spec, 1.0, &g).map_err(err)?).map_err(err)
}

fn oscillator() -> Result<(SpatialGrid, PotentialSpec, GridWavefunction), String> {
    let g = SpatialGrid::new(-16.0, 16.0, 512).map_err(err)?;
    let v = PotentialSpec::harmonic(&g, 1.0, 0.0);
    let psi0 = harmonic_coherent_state(&g, 1.0, 0.0, 2.0, 0.0).normalize().map_err(err)?;
    Ok((g, v, psi0))
}

fn norm_conservation() -> Result<f64, String> {
    let (g, v, psi0) = oscillator()?;
    let prop = SplitStepPropagator::new(&g);
    let mut psi = psi0;
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let before = psi.norm();
        psi = prop.evolve(&psi, &v, 1e-3, 1000).map_err(err)?;
        worst = worst.max((psi.norm() - before).abs());
    }
    Ok(worst)
}

fn momentum_conservation() -> Result<f64, String> {
    let g = SpatialGrid::new(-40.0, 40.0, 1024).map_err(err)?;
    let spec = GaussianPacketSpec::new(-5.0, 1.3, 1.0).map_err(err)?;
    let psi0 = free_gaussian_evolve(&spec, 0.0, &g).map_err(err)?;
    let prop = SplitStepPropagator::new(&g);
    let p0 = prop.mean_momentum(&psi0);
    let psi = prop.evolve(&psi0, &PotentialSpec::zero(&g), 1e-3, 2000).map_err(err)?;
    Ok((prop.mean_momentum(&psi) - p0).abs())
}

/// Relative deviation of the dt-halving error ratio from 4.
fn convergence_order() -> Result<f64, String> {
    let (g, v, psi0) = oscillator()?;
    let exact = harmonic_coherent_state(&g, 1.0, 0.0, 2.0, 1.0);
    let error = |dt: f64| -> Result<f64, String> {
        let steps = (1.0 / dt).round() as usize;
        split_step(&psi0, &v, dt, steps).map_err(err)?.l2_distance(&exact).map_err(err)
    };
    let mut worst = 0.0f64;
    for dt in [0.02, 0.01] {
        let ratio = error(dt)? / error(dt / 2.0)?;
        worst = worst.max((ratio - 4.0).abs() / 4.0);
    }
    Ok(worst)
}

fn time_reversal() -> Result<f64, String> {
    let (_, v, psi0) = oscillator()?;
    let forward = split_step(&psi0, &v, 1e-3, 1000).map_err(err)?;
    let back = split_step(&forward, &v, -1e-3, 1000).map_err(err)?;
    back.l2_distance(&psi0).map_err(err)
}

fn harmonic_revival() -> Result<f64, String> {
    let (g, v, psi0) = oscillator()?;
    let period = 2.0 * PI;
    let steps = (period / 1e-3).round() as usize;
    let psi = split_step(&psi0, &v, period / steps as f64, steps).map_err(err)?;
    // one period multiplies a coherent state by exp(-i omega T / 2) = -1
    let expected = GridWavefunction::new(g, psi0.amplitudes().iter().map(|a| -a).collect()).map_err(err)?;
    psi.l2_distance(&expected).map_err(err)
}

fn random_two_path(rng: &mut ChaCha8Rng, grid: &SpatialGrid) -> Result<TwoPathState, String> {
    let m = rng.gen_range(0..=6);
    let t = rng.gen_range(0.0..3.0);
    let mut packet = || -> Result<GridWavefunction, String> {
        let spec = GaussianPacketSpec::new(rng.gen_range(-8.0..8.0), rng.gen_range(-1.5..1.5), rng.gen_range(0.8..2.0))
            .map_err(err)?
            .with_phase(rng.gen_range(0.0..2.0 * PI));
        free_gaussian_evolve(&spec, t, grid).map_err(err)
    };
    let (psi_a, psi_b) = (packet()?, packet()?);
    let (phi_a, phi_b) = if rng.gen_bool(0.5) {
        let spec = RecorderSpec::recording_on(m, rng.gen_range(0.0..=PI), PathLabel::B).map_err(err)?;
        let env = initial_env(m).map_err(err)?;
        let u = random_common(rng, m);
        (
            apply_common_unitary(&apply_recorder(&env, &spec, PathLabel::A).map_err(err)?, &u).map_err(err)?,
            apply_common_unitary(&apply_recorder(&env, &spec, PathLabel::B).map_err(err)?, &u).map_err(err)?,
        )
    } else {
        (random_env(rng, m)?, random_env(rng, m)?)
    };
    TwoPathState::new(
        BranchState::new(psi_a, phi_a, PathLabel::A).map_err(err)?,
        BranchState::new(psi_b, phi_b, PathLabel::B).map_err(err)?,
    )
    .map_err(err)
}

fn oracle_equivalence() -> Result<f64, String> {
    let grid = SpatialGrid::new(-32.0, 32.0, 512).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let state = random_two_path(&mut rng, &grid)?;
        let fast = two_path_pattern(&state).map_err(err)?;
        let brute = joint_pattern_bruteforce(&state).map_err(err)?;
        worst = worst.max(fast.max_abs_difference(&brute));
    }
    Ok(worst)
}

fn default_state(m: usize, theta: f64) -> Result<TwoPathState, String> {
    let geometry = TwoSlitGeometry::new(16.0, 1.0, 600.0).map_err(err)?;
    let grid = SpatialGrid::new(-2048.0, 2048.0, 1 << 15).map_err(err)?;
    make_two_path_branches(&geometry, &RecorderSpec::new(m, theta).map_err(err)?, &grid).map_err(err)
}

fn decohered_convexity() -> Result<f64, String> {
    let state = default_state(3, PI)?;
    let two = two_path_pattern(&state).map_err(err)?;
    let pa = single_path_pattern(state.branch_a());
    let pb = single_path_pattern(state.branch_b());
    Ok(two
        .intensity()
        .iter()
        .zip(pa.intensity().iter().zip(pb.intensity()))
        .map(|(i, (a, b))| (i - 0.5 * (a + b)).abs())
        .fold(0.0, f64::max))
}

const LAW_GAMMAS: [f64; 6] = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0];

/// `(gamma, visibility, distinguishability, pattern total, coherence)` for
/// each overlap the visibility law is checked at.
fn law_measurements() -> Result<Vec<[f64; 5]>, String> {
    LAW_GAMMAS
        .iter()
        .map(|&gamma| {
            let state = default_state(1, 2.0 * gamma.acos())?;
            let pattern = two_path_pattern(&state).map_err(err)?;
            let report = measure_visibility(&pattern, DEFAULT_ENVELOPE_THRESHOLD).map_err(err)?;
            let d = distinguishability(state.gamma()).map_err(err)?;
            let rho = reduced_rho_partial_trace(&state).map_err(err)?;
            Ok([gamma, report.visibility, d, pattern.total(), coherence_magnitude(&rho)])
        })
        .collect()
}

fn visibility_law() -> Result<f64, String> {
    Ok(law_measurements()?.iter().map(|r| (r[1] - r[0]).abs()).fold(0.0, f64::max))
}

fn complementarity_bound() -> Result<f64, String> {
    let worst = law_measurements()?.iter().map(|r| r[1] * r[1] + r[2] * r[2] - 1.0).fold(0.0, f64::max);
    Ok(worst.max(0.0))
}

fn complementarity_equality() -> Result<f64, String> {
    Ok(law_measurements()?.iter().map(|r| (r[1] * r[1] + r[2] * r[2] - 1.0).abs()).fold(0.0, f64::max))
}

fn pattern_normalization() -> Result<f64, String> {
    let mut worst = law_measurements()?.iter().map(|r| (r[3] - 1.0).abs()).fold(0.0, f64::max);
    let state = default_state(4, PI / 2.0)?;
    for p in [single_path_pattern(state.branch_a()), single_path_pattern(state.branch_b())] {
        worst = worst.max((p.total() - 1.0).abs());
    }
    Ok(worst)
}

fn coherence_matches_visibility() -> Result<f64, String> {
    Ok(law_measurements()?.iter().map(|r| (r[4] - r[1]).abs()).fold(0.0, f64::max))
}

fn partial_trace_equivalence() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let geometry = TwoSlitGeometry::new(14.0, 1.0, 0.0).map_err(err)?;
    let grid = SpatialGrid::new(-32.0, 32.0, 512).map_err(err)?;
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let spec = random_recorder(&mut rng, 8)?;
        let state = make_two_path_branches(&geometry, &spec, &grid).map_err(err)?;
        let traced = reduced_rho_partial_trace(&state).map_err(err)?;
        let closed = reduced_rho_closed_form(state.gamma()).map_err(err)?;
        worst = worst.max(traced.max_abs_difference(&closed));
    }
    Ok(worst)
}

fn validity_residual(rho: &ReducedDensityMatrix2) -> f64 {
    let [low, _] = rho.eigenvalues();
    (rho.trace() - 1.0)
        .abs()
        .max((rho.get(0, 1) - rho.get(1, 0).conj()).norm())
        .max(rho.get(0, 0).im.abs())
        .max(rho.get(1, 1).im.abs())
        .max(-low)
        .max(0.0)
}

fn matrix_validity() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let r = rng.gen_range(0.0..=1.0);
        let gamma = Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
        worst = worst.max(validity_residual(&reduced_rho_closed_form(gamma).map_err(err)?));
    }
    Ok(worst)
}

fn idempotence() -> Result<f64, String> {
    let rho = reduced_rho_partial_trace(&default_state(4, 0.0)?).map_err(err)?;
    let sq = rho.square();
    let mut worst = (purity(&rho) - 1.0).abs();
    for (i, row) in sq.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - rho.get(i, j)).norm());
        }
    }
    Ok(worst)
}

const PROBE_CONFIG: &str = r#"
[geometry]
slit_separation = 16.0
packet_width = 1.0
propagation_time = 600.0

[recorder]
n_qubits = 3
kick_angle = 0.7
"#;

/// 0 when two runs of the same configuration produce identical bytes.
fn determinism() -> Result<f64, String> {
    let exp = ExperimentConfig::parse(PROBE_CONFIG).and_then(|c| c.validate()).map_err(err)?;
    let render = || -> Result<(String, String), String> {
        let sim = simulate(&exp, true).map_err(err)?;
        Ok((pattern_csv(&sim), Summary::from_simulation(&sim).to_json()))
    };
    Ok(if render()? == render()? { 0.0 } else { 1.0 })
}

/// Number of sweep rows that differ between serial and parallel execution.
fn sweep_order_independence() -> Result<f64, String> {
    let base = PROBE_CONFIG.replace("[geometry]", "[base.geometry]").replace("[recorder]", "[base.recorder]");
    let text = format!("[sweep]\nparameter = \"n_qubits\"\nvalues = [6, 0, 3, 1, 5, 2, 4, 7]\n{base}");
    let cfg = SweepConfig::parse(&text).map_err(err)?;
    let experiments = cfg.validate().map_err(err)?;
    let max = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4).max(2);
    let serial = sweep_csv(&run_points(&cfg.sweep.values, &experiments, 1).map_err(err)?);
    let parallel = sweep_csv(&run_points(&cfg.sweep.values, &experiments, max).map_err(err)?);
    Ok(serial.lines().zip(parallel.lines()).filter(|(a, b)| a != b).count() as f64
        + serial.lines().count().abs_diff(parallel.lines().count()) as f64)
}

/// Number of malformed configurations that were accepted.
fn strict_rejection() -> Result<f64, String> {
    let edits: [(&str, &str); 10] = [
        ("packet_width = 1.0", "packet_width = -1.0"),
        ("packet_width = 1.0", "packet_width = 1.0\nwidth = 2.0"),
        ("kick_angle = 0.7", "kick_angle = 3.5"),
        ("kick_angle = 0.7", "kick_angle = -0.1"),
        ("n_qubits = 3", "n_qubits = 21"),
        ("slit_separation = 16.0", "slit_separation = -16.0"),
        ("propagation_time = 600.0", "propagation_time = -1.0"),
        ("propagation_time = 600.0", "propagation_time = 600.0\n[grid]\nn_points = 1000"),
        ("n_qubits = 3", "n_qubits = 3\n[numerics]\nenvelope_threshold = 1.5"),
        ("[recorder]", "[recorder]\nseed = 4"),
    ];
    let accepted = edits
        .iter()
        .filter(|(from, to)| {
            ExperimentConfig::parse(&PROBE_CONFIG.replace(from, to)).and_then(|c| c.validate()).is_ok()
        })
        .count();
    let base = PROBE_CONFIG.replace("[geometry]", "[base.geometry]").replace("[recorder]", "[base.recorder]");
    let sweeps = [
        format!("[sweep]\nparameter = \"kick_angle\"\nvalues = []\n{base}"),
        format!("[sweep]\nparameter = \"kick_angle\"\nvalues = [0.1, 4.0]\n{base}"),
        format!("[sweep]\nparameter = \"n_qubits\"\nvalues = [2.5]\n{base}"),
        format!("[sweep]\nparameter = \"mass\"\nvalues = [1.0]\n{base}"),
        format!("[sweep]\nparameter = \"n_qubits\"\nvalues = [1]\nparallelism = 0\n{base}"),
    ];
    let sweeps_accepted = sweeps
        .iter()
        .filter(|text| SweepConfig::parse(text).and_then(|c| c.validate()).is_ok())
        .count();
    Ok((accepted + sweeps_accepted) as f64)
}
