//! Single-configuration pipeline: branches, patterns, visibility, reduced
//! density matrix and the per-run consistency checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use whichpath::densmat::BASIS_ORTHOGONALITY_LIMIT;
use whichpath::interference::BRUTEFORCE_MAX_QUBITS;
use whichpath::{
    coherence_magnitude, distinguishability, joint_pattern_bruteforce,
    make_two_path_branches_with, measure_visibility, purity, reduced_rho_closed_form,
    reduced_rho_partial_trace, single_path_pattern, two_path_pattern, Complex64,
    DetectionPattern, Error, ReducedDensityMatrix2, TwoPathState, VisibilityReport,
};

use crate::config::Experiment;

pub const PATTERN_HEADER: &str = "x,intensity_two_path,intensity_A,intensity_B,intensity_incoherent";

const ORACLE_TOLERANCE: f64 = 1e-10;
const NORMALIZATION_TOLERANCE: f64 = 1e-9;
const MATRIX_TOLERANCE: f64 = 1e-12;
const COMPLEMENTARITY_SLACK: f64 = 1e-6;
/// Joint-vector size up to which a run cross-checks against the brute-force marginal.
const RUN_ORACLE_MAX_JOINT: usize = 1 << 24;

pub struct Simulation {
    pub state: TwoPathState,
    pub pattern: DetectionPattern,
    pub pattern_a: DetectionPattern,
    pub pattern_b: DetectionPattern,
    pub gamma: Complex64,
    pub visibility: Option<VisibilityReport>,
    pub distinguishability: f64,
    pub rho: ReducedDensityMatrix2,
    pub checks: BTreeMap<&'static str, bool>,
}

impl Simulation {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|ok| *ok)
    }

    pub fn purity(&self) -> f64 {
        purity(&self.rho)
    }
}

fn visibility_or_none(pattern: &DetectionPattern, threshold: f64) -> Result<Option<VisibilityReport>, Error> {
    match measure_visibility(pattern, threshold) {
        Ok(r) => Ok(Some(r)),
        Err(Error::FringeResolution { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs the pipeline. With `cross_check` the pattern is compared against the
/// brute-force joint marginal when the register is small enough.
pub fn simulate(exp: &Experiment, cross_check: bool) -> Result<Simulation, Error> {
    let state = make_two_path_branches_with(&exp.geometry, &exp.recorder, &exp.grid, exp.evolution)?;
    let gamma = state.gamma();
    let pattern = two_path_pattern(&state)?;
    let pattern_a = single_path_pattern(state.branch_a());
    let pattern_b = single_path_pattern(state.branch_b());
    let visibility = visibility_or_none(&pattern, exp.envelope_threshold)?;
    let distinguishability = distinguishability(gamma)?;
    let closed = reduced_rho_closed_form(gamma)?;

    let mut checks = BTreeMap::new();
    checks.insert("pattern_nonnegative", pattern.intensity().iter().all(|v| *v >= 0.0));
    let basis_ok = state.spatial_overlap().norm() <= BASIS_ORTHOGONALITY_LIMIT;
    let rho = if basis_ok {
        let traced = reduced_rho_partial_trace(&state)?;
        checks.insert(
            "partial_trace_matches_closed_form",
            traced.max_abs_difference(&closed) <= MATRIX_TOLERANCE,
        );
        checks.insert("pattern_normalized", (pattern.total() - 1.0).abs() <= NORMALIZATION_TOLERANCE);
        traced
    } else {
        closed
    };
    let [low, high] = rho.eigenvalues();
    checks.insert(
        "density_matrix_valid",
        (rho.trace() - 1.0).abs() <= MATRIX_TOLERANCE
            && (rho.get(0, 1) - rho.get(1, 0).conj()).norm() <= MATRIX_TOLERANCE
            && low >= -MATRIX_TOLERANCE
            && high <= 1.0 + MATRIX_TOLERANCE,
    );
    if let Some(v) = &visibility {
        checks.insert(
            "complementarity_bound",
            v.visibility.powi(2) + distinguishability.powi(2) <= 1.0 + COMPLEMENTARITY_SLACK,
        );
    }
    let joint = exp.grid.n_points().saturating_mul(1usize << exp.recorder.n_qubits().min(30));
    if cross_check && exp.recorder.n_qubits() <= BRUTEFORCE_MAX_QUBITS && joint <= RUN_ORACLE_MAX_JOINT {
        let brute = joint_pattern_bruteforce(&state)?;
        checks.insert("bruteforce_marginal_agreement", pattern.max_abs_difference(&brute) <= ORACLE_TOLERANCE);
    }

    Ok(Simulation {
        state,
        pattern,
        pattern_a,
        pattern_b,
        gamma,
        visibility,
        distinguishability,
        rho,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub gamma: ComplexJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visibility: Option<f64>,
    pub distinguishability: f64,
    pub purity: f64,
    pub coherence: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fringe_spacing: Option<f64>,
    pub rho: [[ComplexJson; 2]; 2],
    pub invariant_checks: BTreeMap<&'static str, &'static str>,
}

impl Summary {
    pub fn from_simulation(sim: &Simulation) -> Self {
        let e = sim.rho.entries();
        Summary {
            gamma: sim.gamma.into(),
            visibility: sim.visibility.as_ref().map(|v| v.visibility),
            distinguishability: sim.distinguishability,
            purity: sim.purity(),
            coherence: coherence_magnitude(&sim.rho),
            fringe_spacing: sim.visibility.as_ref().map(|v| v.fringe_spacing),
            rho: [[e[0][0].into(), e[0][1].into()], [e[1][0].into(), e[1][1].into()]],
            invariant_checks: sim
                .checks
                .iter()
                .map(|(k, ok)| (*k, if *ok { "pass" } else { "fail" }))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Formats a value with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn pattern_csv(sim: &Simulation) -> String {
    let grid = sim.pattern.grid();
    let mut out = String::with_capacity(grid.n_points() * 128);
    out.push_str(PATTERN_HEADER);
    out.push('\n');
    let rows = sim
        .pattern
        .intensity()
        .iter()
        .zip(sim.pattern_a.intensity())
        .zip(sim.pattern_b.intensity());
    for (i, ((two, a), b)) in rows.enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt17(grid.x(i)),
            fmt17(*two),
            fmt17(*a),
            fmt17(*b),
            fmt17(0.5 * (a + b))
        );
    }
    out
}
