//! Detection-screen densities and fringe visibility.
//!
//! Tracing the two-path density over the internal environment leaves
//!
//! ```text
//! I(X) = (|psi_A|^2 + |psi_B|^2) / 2 + Re[ conj(psi_A) psi_B <Phi_A|Phi_B> ]
//! ```
//!
//! so the environment enters only through `gamma = <Phi_B|Phi_A>`.
//! [`joint_pattern_bruteforce`] performs the same marginalization literally on
//! the joint amplitude and serves as an oracle for [`two_path_pattern`].

use std::ops::Range;

use num_complex::Complex64;

use crate::environment::distinguishability;
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::state::{BranchState, PathLabel, TwoPathState};

/// Intensities below zero by more than this signal a bug, not round-off.
pub const NEGATIVE_INTENSITY_ALARM: f64 = 1e-9;
/// Default envelope threshold for [`measure_visibility`].
pub const DEFAULT_ENVELOPE_THRESHOLD: f64 = 0.25;
/// Largest register accepted by the brute-force oracle.
pub const BRUTEFORCE_MAX_QUBITS: usize = 8;
/// Largest joint vector (`n_points * 2^M`) accepted by the brute-force oracle.
pub const BRUTEFORCE_MAX_JOINT: usize = 1 << 24;

/// Relative fringe modulation below which a pattern counts as flat.
const FLAT_SIGNAL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    PathAOnly,
    PathBOnly,
    TwoPath,
}

impl PatternKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PatternKind::PathAOnly => "path_A_only",
            PatternKind::PathBOnly => "path_B_only",
            PatternKind::TwoPath => "two_path",
        }
    }
}

/// Screen density together with the incoherent envelope `(rho_A + rho_B) / 2`
/// it is measured against.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionPattern {
    grid: SpatialGrid,
    intensity: Vec<f64>,
    envelope: Vec<f64>,
    kind: PatternKind,
    gamma: Option<Complex64>,
}

impl DetectionPattern {
    pub fn new(
        grid: SpatialGrid,
        intensity: Vec<f64>,
        envelope: Vec<f64>,
        kind: PatternKind,
        gamma: Option<Complex64>,
    ) -> Result<Self> {
        let n = grid.n_points();
        if intensity.len() != n || envelope.len() != n {
            return Err(Error::Shape(format!(
                "pattern has {} intensity / {} envelope samples for a {n}-point grid",
                intensity.len(),
                envelope.len()
            )));
        }
        if intensity.iter().chain(&envelope).any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::NumericalConsistency(
                "pattern contains negative or non-finite values".into(),
            ));
        }
        Ok(DetectionPattern { grid, intensity, envelope, kind, gamma })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn intensity(&self) -> &[f64] {
        &self.intensity
    }

    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// Environment overlap behind a two-path pattern.
    pub fn gamma(&self) -> Option<Complex64> {
        self.gamma
    }

    /// `sum_i I_i dx`.
    pub fn total(&self) -> f64 {
        self.intensity.iter().sum::<f64>() * self.grid.dx()
    }

    pub fn mean_position(&self) -> f64 {
        let weighted: f64 = self.intensity.iter().zip(self.grid.points()).map(|(i, x)| i * x).sum();
        weighted * self.grid.dx() / self.total()
    }

    /// Largest pointwise difference to another pattern's intensity.
    pub fn max_abs_difference(&self, other: &DetectionPattern) -> f64 {
        self.intensity
            .iter()
            .zip(&other.intensity)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Density at the screen when only `branch`'s path is open. The internal
/// environment drops out entirely.
pub fn single_path_pattern(branch: &BranchState) -> DetectionPattern {
    let intensity = branch.psi().density();
    let kind = match branch.label() {
        PathLabel::A => PatternKind::PathAOnly,
        PathLabel::B => PatternKind::PathBOnly,
    };
    DetectionPattern {
        grid: *branch.psi().grid(),
        envelope: intensity.clone(),
        intensity,
        kind,
        gamma: None,
    }
}

fn incoherent_envelope(state: &TwoPathState) -> Vec<f64> {
    state
        .branch_a()
        .psi()
        .amplitudes()
        .iter()
        .zip(state.branch_b().psi().amplitudes())
        .map(|(a, b)| 0.5 * (a.norm_sqr() + b.norm_sqr()))
        .collect()
}

fn clamp_round_off(raw: Vec<f64>) -> Result<Vec<f64>> {
    if let Some((i, v)) = raw.iter().enumerate().find(|(_, v)| !(**v >= -NEGATIVE_INTENSITY_ALARM)) {
        return Err(Error::NumericalConsistency(format!(
            "intensity {v:e} at index {i} is below -{NEGATIVE_INTENSITY_ALARM:e}"
        )));
    }
    Ok(raw.into_iter().map(|v| v.max(0.0)).collect())
}

/// Screen density with both paths open, from the factorized cross term.
pub fn two_path_pattern(state: &TwoPathState) -> Result<DetectionPattern> {
    let gamma = state.gamma();
    // <Phi_A|Phi_B> multiplies conj(psi_A) psi_B
    let cross_weight = gamma.conj();
    let raw = state
        .branch_a()
        .psi()
        .amplitudes()
        .iter()
        .zip(state.branch_b().psi().amplitudes())
        .map(|(a, b)| 0.5 * (a.norm_sqr() + b.norm_sqr()) + (cross_weight * a.conj() * b).re)
        .collect();
    Ok(DetectionPattern {
        grid: *state.grid(),
        intensity: clamp_round_off(raw)?,
        envelope: incoherent_envelope(state),
        kind: PatternKind::TwoPath,
        gamma: Some(gamma),
    })
}

/// Builds the joint amplitude `(psi_A Phi_A + psi_B Phi_B) / sqrt(2)` row by
/// row and sums `|Psi(X_i, q_j)|^2` over the environment index `j`.
pub fn joint_pattern_bruteforce(state: &TwoPathState) -> Result<DetectionPattern> {
    let m = state.n_qubits();
    let n = state.grid().n_points();
    if m > BRUTEFORCE_MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "brute-force marginal limited to {BRUTEFORCE_MAX_QUBITS} qubits (got {m})"
        )));
    }
    let dim = 1usize << m;
    if n.saturating_mul(dim) > BRUTEFORCE_MAX_JOINT {
        return Err(Error::Capacity(format!(
            "joint vector of {n} x {dim} exceeds {BRUTEFORCE_MAX_JOINT}"
        )));
    }
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let phi_a = state.branch_a().phi().amplitudes();
    let phi_b = state.branch_b().phi().amplitudes();
    let mut row = vec![Complex64::new(0.0, 0.0); dim];
    let raw = state
        .branch_a()
        .psi()
        .amplitudes()
        .iter()
        .zip(state.branch_b().psi().amplitudes())
        .map(|(&psi_a, &psi_b)| {
            for (slot, (fa, fb)) in row.iter_mut().zip(phi_a.iter().zip(phi_b)) {
                *slot = (psi_a * fa + psi_b * fb) * norm;
            }
            row.iter().map(|amp| amp.norm_sqr()).sum::<f64>()
        })
        .collect();
    Ok(DetectionPattern {
        grid: *state.grid(),
        intensity: clamp_round_off(raw)?,
        envelope: incoherent_envelope(state),
        kind: PatternKind::TwoPath,
        gamma: Some(state.gamma()),
    })
}

/// Fringe contrast measured inside the envelope region of a pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityReport {
    pub visibility: f64,
    pub gamma_magnitude: Option<f64>,
    pub distinguishability: Option<f64>,
    pub fringe_spacing: f64,
    pub envelope_region: Range<usize>,
    pub extremum_pairs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Extremum {
    Max(usize),
    Min(usize),
}

/// Measures fringe visibility.
///
/// The region is the contiguous run around the envelope peak where the
/// envelope is at least `envelope_threshold` of its maximum. Inside it the
/// intensity is divided by the envelope, so the remaining signal is
/// `1 + v(X) cos(phase)`; its interior extrema are found by three-point
/// comparison and `(s_max - s_min) / (s_max + s_min)` is averaged over
/// adjacent max/min pairs.
pub fn measure_visibility(
    pattern: &DetectionPattern,
    envelope_threshold: f64,
) -> Result<VisibilityReport> {
    if !(envelope_threshold > 0.0 && envelope_threshold < 1.0) {
        return Err(Error::Domain(format!(
            "envelope threshold {envelope_threshold} outside (0, 1)"
        )));
    }
    let env = &pattern.envelope;
    let (peak_idx, peak) = env
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    if !(peak > 0.0) {
        return Err(Error::DegenerateState(peak));
    }
    let cut = envelope_threshold * peak;
    let mut lo = peak_idx;
    while lo > 0 && env[lo - 1] >= cut {
        lo -= 1;
    }
    let mut hi = peak_idx + 1;
    while hi < env.len() && env[hi] >= cut {
        hi += 1;
    }
    let region = lo..hi;

    let signal: Vec<f64> = region.clone().map(|i| pattern.intensity[i] / env[i]).collect();
    let (s_min, s_max) = signal
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    if signal.len() < 3 || (s_max - s_min) <= FLAT_SIGNAL * (s_max + s_min) {
        return Err(Error::FringeResolution { maxima: 0 });
    }

    let extrema: Vec<Extremum> = (1..signal.len() - 1)
        .filter_map(|i| {
            let (prev, here, next) = (signal[i - 1], signal[i], signal[i + 1]);
            if here > prev && here >= next {
                Some(Extremum::Max(i))
            } else if here < prev && here <= next {
                Some(Extremum::Min(i))
            } else {
                None
            }
        })
        .collect();
    let maxima: Vec<usize> = extrema
        .iter()
        .filter_map(|e| match e {
            Extremum::Max(i) => Some(*i),
            Extremum::Min(_) => None,
        })
        .collect();
    if maxima.len() < 2 {
        return Err(Error::FringeResolution { maxima: maxima.len() });
    }

    let contrasts: Vec<f64> = extrema
        .windows(2)
        .filter_map(|w| match (w[0], w[1]) {
            (Extremum::Max(a), Extremum::Min(b)) | (Extremum::Min(b), Extremum::Max(a)) => {
                Some((signal[a] - signal[b]) / (signal[a] + signal[b]))
            }
            _ => None,
        })
        .collect();
    if contrasts.is_empty() {
        return Err(Error::FringeResolution { maxima: maxima.len() });
    }
    let visibility = contrasts.iter().sum::<f64>() / contrasts.len() as f64;
    let dx = pattern.grid.dx();
    let fringe_spacing = (maxima[maxima.len() - 1] - maxima[0]) as f64 * dx / (maxima.len() - 1) as f64;

    let gamma_magnitude = pattern.gamma.map(|g| g.norm());
    let distinguishability = pattern.gamma.map(distinguishability).transpose()?;
    Ok(VisibilityReport {
        visibility,
        gamma_magnitude,
        distinguishability,
        fringe_spacing,
        envelope_region: region,
        extremum_pairs: contrasts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::RecorderSpec;
    use crate::propagation::{make_two_path_branches, TwoSlitGeometry};
    use crate::state::{EnvironmentState, GridWavefunction};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn state_with(
        grid: SpatialGrid,
        psi_a: &GridWavefunction,
        psi_b: &GridWavefunction,
        phi_a: EnvironmentState,
        phi_b: EnvironmentState,
    ) -> TwoPathState {
        TwoPathState::new(
            BranchState::new(psi_a.clone(), phi_a, PathLabel::A).unwrap(),
            BranchState::new(psi_b.clone(), phi_b, PathLabel::B).unwrap(),
        )
        .inspect(|s| assert_eq!(s.grid(), &grid))
        .unwrap()
    }

    fn gaussian(grid: SpatialGrid, center: f64, k: f64) -> GridWavefunction {
        GridWavefunction::from_fn(grid, |x| c(-(x - center).powi(2) / 4.0, k * x).exp())
            .normalize()
            .unwrap()
    }

    #[test]
    fn single_path_ignores_environment() {
        let g = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
        let psi = gaussian(g, 1.0, 0.0);
        let a = BranchState::new(psi.clone(), EnvironmentState::basis(2, 0).unwrap(), PathLabel::A)
            .unwrap();
        let b = BranchState::new(psi, EnvironmentState::basis(2, 3).unwrap(), PathLabel::A).unwrap();
        let pa = single_path_pattern(&a);
        assert_eq!(pa.intensity(), single_path_pattern(&b).intensity());
        assert_eq!(pa.kind(), PatternKind::PathAOnly);
        assert!((pa.mean_position() - 1.0).abs() < 1e-9);
        assert!((pa.total() - 1.0).abs() < 1e-12);
        assert!(matches!(
            measure_visibility(&pa, DEFAULT_ENVELOPE_THRESHOLD),
            Err(Error::FringeResolution { .. })
        ));
    }

    #[test]
    fn coincident_coherent_branches_give_single_density() {
        let g = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
        let psi = gaussian(g, 0.0, 0.5);
        let phi = EnvironmentState::basis(1, 0).unwrap();
        let s = state_with(g, &psi, &psi, phi.clone(), phi);
        let p = two_path_pattern(&s).unwrap();
        // |psi + psi|^2 / 2: coincident branches are not orthogonal, so the
        // pattern carries weight 2
        for (i, a) in p.intensity().iter().zip(psi.amplitudes()) {
            assert!((i - 2.0 * a.norm_sqr()).abs() < 1e-15);
        }
        assert!((p.total() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_environments_give_incoherent_mixture() {
        let g = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
        let (pa, pb) = (gaussian(g, -2.0, 0.0), gaussian(g, 2.0, 0.0));
        let s = state_with(
            g,
            &pa,
            &pb,
            EnvironmentState::basis(1, 0).unwrap(),
            EnvironmentState::basis(1, 1).unwrap(),
        );
        let p = two_path_pattern(&s).unwrap();
        for ((i, a), b) in p.intensity().iter().zip(pa.amplitudes()).zip(pb.amplitudes()) {
            assert_eq!(*i, 0.5 * (a.norm_sqr() + b.norm_sqr()));
        }
    }

    #[test]
    fn complex_gamma_matches_bruteforce() {
        // a complex overlap distinguishes <Phi_A|Phi_B> from its conjugate
        let g = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
        let (pa, pb) = (gaussian(g, -1.0, 0.3), gaussian(g, 1.5, -0.2));
        let phi_a = EnvironmentState::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let phi_b = EnvironmentState::from_amplitudes(vec![c(0.8, 0.0), c(0.6, 0.0)]).unwrap();
        let s = state_with(g, &pa, &pb, phi_a, phi_b);
        assert!(s.gamma().im.abs() > 0.4);
        let fast = two_path_pattern(&s).unwrap();
        let brute = joint_pattern_bruteforce(&s).unwrap();
        assert!(fast.max_abs_difference(&brute) < 1e-14);
    }

    #[test]
    fn bruteforce_capacity() {
        let g = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
        let psi = gaussian(g, 0.0, 0.0);
        let big = EnvironmentState::basis(9, 0).unwrap();
        let s = state_with(g, &psi, &psi, big.clone(), big);
        assert!(matches!(joint_pattern_bruteforce(&s), Err(Error::Capacity(_))));
        let g = SpatialGrid::new(-20.0, 20.0, 1 << 17).unwrap();
        let psi = gaussian(g, 0.0, 0.0);
        let e = EnvironmentState::basis(8, 0).unwrap();
        let s = state_with(g, &psi, &psi, e.clone(), e);
        assert!(matches!(joint_pattern_bruteforce(&s), Err(Error::Capacity(_))));
    }

    #[test]
    fn negative_intensity_alarm() {
        assert!(clamp_round_off(vec![1.0, -1e-13, 0.5]).unwrap()[1] == 0.0);
        assert!(matches!(
            clamp_round_off(vec![1.0, -1e-6]),
            Err(Error::NumericalConsistency(_))
        ));
    }

    fn far_field(gamma_angle: f64) -> DetectionPattern {
        let g = SpatialGrid::new(-2048.0, 2048.0, 1 << 15).unwrap();
        let geom = TwoSlitGeometry::new(16.0, 1.0, 600.0).unwrap();
        let rec = RecorderSpec::new(1, gamma_angle).unwrap();
        two_path_pattern(&make_two_path_branches(&geom, &rec, &g).unwrap()).unwrap()
    }

    #[test]
    fn full_coherence_has_unit_visibility() {
        let r = measure_visibility(&far_field(0.0), DEFAULT_ENVELOPE_THRESHOLD).unwrap();
        assert!((r.visibility - 1.0).abs() < 1e-3, "{r:?}");
        assert_eq!(r.distinguishability, Some(0.0));
        // far-field spacing 2 pi t / d
        let expected = 2.0 * PI * 600.0 / 16.0;
        assert!((r.fringe_spacing - expected).abs() / expected < 0.02, "{r:?}");
    }

    #[test]
    fn half_overlap_has_half_visibility() {
        // cos(theta/2) = 0.5
        let r = measure_visibility(&far_field(2.0 * 0.5f64.acos()), 0.25).unwrap();
        assert!((r.visibility - 0.5).abs() < 1e-2, "{r:?}");
    }

    #[test]
    fn decohered_pattern_has_no_fringes() {
        match measure_visibility(&far_field(PI), 0.25) {
            Err(Error::FringeResolution { .. }) => {}
            Ok(r) => assert!(r.visibility < 0.01),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn threshold_domain() {
        let p = far_field(0.0);
        assert!(matches!(measure_visibility(&p, 0.0), Err(Error::Domain(_))));
        assert!(matches!(measure_visibility(&p, 1.0), Err(Error::Domain(_))));
    }
}
