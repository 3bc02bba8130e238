//! Path-conditional recording dynamics of the internal environment.
//!
//! The internal degrees of freedom are modelled as a register of qubits. A
//! which-path record is written by rotating every qubit about the Bloch `y`
//! axis when the object takes the recording path, so the two branch
//! environments end up with overlap `cos(theta/2)^M`. Internal dynamics
//! shared by both paths are represented by [`CommonUnitarySpec`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{overlap_env, EnvironmentState, PathLabel};

/// Largest register handled as a dense state vector.
pub const MAX_QUBITS: usize = 20;

/// Tolerance on `|gamma| <= 1` before a value is treated as out of domain.
pub const GAMMA_DOMAIN_TOLERANCE: f64 = 1e-9;

type Gate = [[Complex64; 2]; 2];

/// Parameters of the which-path recorder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecorderSpec {
    n_qubits: usize,
    kick_angle: f64,
    record_on_path: PathLabel,
}

impl RecorderSpec {
    /// Recorder that writes on path B.
    pub fn new(n_qubits: usize, kick_angle: f64) -> Result<Self> {
        Self::recording_on(n_qubits, kick_angle, PathLabel::B)
    }

    pub fn recording_on(n_qubits: usize, kick_angle: f64, path: PathLabel) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{n_qubits} qubits exceeds the cap of {MAX_QUBITS}"
            )));
        }
        if !(0.0..=PI).contains(&kick_angle) {
            return Err(Error::Configuration(format!(
                "kick angle {kick_angle} outside [0, pi]"
            )));
        }
        Ok(RecorderSpec { n_qubits, kick_angle, record_on_path: path })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn kick_angle(&self) -> f64 {
        self.kick_angle
    }

    pub fn record_on_path(&self) -> PathLabel {
        self.record_on_path
    }

    /// Closed-form branch overlap `cos(theta/2)^M` of this model.
    pub fn predicted_overlap(&self) -> f64 {
        (self.kick_angle / 2.0).cos().powi(self.n_qubits as i32)
    }
}

/// Internal dynamics applied identically on both paths.
///
/// Qubit `k` evolves for `duration` under the single-qubit generator
/// `phase_rates[k] |1><1| + mixing_rates[k] X / 2`. An empty `mixing_rates`
/// means no mixing term.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonUnitarySpec {
    pub phase_rates: Vec<f64>,
    pub mixing_rates: Vec<f64>,
    pub duration: f64,
}

impl CommonUnitarySpec {
    pub fn phases(phase_rates: Vec<f64>, duration: f64) -> Self {
        CommonUnitarySpec { phase_rates, mixing_rates: Vec::new(), duration }
    }

    pub fn with_mixing(mut self, mixing_rates: Vec<f64>) -> Self {
        self.mixing_rates = mixing_rates;
        self
    }

    fn gate(&self, k: usize) -> Gate {
        let phase = self.phase_rates[k];
        let mixing = self.mixing_rates.get(k).copied().unwrap_or(0.0);
        // H = (phase/2) I + (mixing/2) X - (phase/2) Z
        let (ax, az) = (mixing / 2.0, -phase / 2.0);
        let r = (ax * ax + az * az).sqrt();
        let global = Complex64::from_polar(1.0, -phase / 2.0 * self.duration);
        let (c, s) = ((r * self.duration).cos(), (r * self.duration).sin());
        let (nx, nz) = if r > 0.0 { (ax / r, az / r) } else { (0.0, 0.0) };
        let i = Complex64::i();
        // exp(-i H t) = e^{-i phase t / 2} (cos(rt) I - i sin(rt) n.sigma)
        [
            [global * (c - i * s * nz), global * (-i * s * nx)],
            [global * (-i * s * nx), global * (c + i * s * nz)],
        ]
    }
}

/// The all-|0> product state of `n_qubits` qubits.
pub fn initial_env(n_qubits: usize) -> Result<EnvironmentState> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits exceeds the cap of {MAX_QUBITS}"
        )));
    }
    EnvironmentState::basis(n_qubits, 0)
}

fn apply_gate(env: &mut EnvironmentState, qubit: usize, gate: &Gate) {
    let stride = 1usize << qubit;
    let amps = env.amplitudes_mut();
    for block in amps.chunks_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a0, *a1);
            *a0 = gate[0][0] * x0 + gate[0][1] * x1;
            *a1 = gate[1][0] * x0 + gate[1][1] * x1;
        }
    }
}

fn y_rotation(theta: f64) -> Gate {
    let (s, c) = (theta / 2.0).sin_cos();
    let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
    [[c, -s], [s, c]]
}

/// Writes the which-path record if `path` is the recording path.
pub fn apply_recorder(
    env: &EnvironmentState,
    spec: &RecorderSpec,
    path: PathLabel,
) -> Result<EnvironmentState> {
    if env.n_qubits() != spec.n_qubits {
        return Err(Error::Shape(format!(
            "register has {} qubits, recorder expects {}",
            env.n_qubits(),
            spec.n_qubits
        )));
    }
    let mut out = env.clone();
    if path == spec.record_on_path {
        let gate = y_rotation(spec.kick_angle);
        for k in 0..spec.n_qubits {
            apply_gate(&mut out, k, &gate);
        }
    }
    Ok(out)
}

/// `<Phi_B|Phi_A>` after recording on a fresh register.
pub fn branch_overlap_after_recording(spec: &RecorderSpec) -> Result<Complex64> {
    let initial = initial_env(spec.n_qubits)?;
    let phi_a = apply_recorder(&initial, spec, PathLabel::A)?;
    let phi_b = apply_recorder(&initial, spec, PathLabel::B)?;
    overlap_env(&phi_a, &phi_b)
}

pub fn apply_common_unitary(
    env: &EnvironmentState,
    spec: &CommonUnitarySpec,
) -> Result<EnvironmentState> {
    let m = env.n_qubits();
    if spec.phase_rates.len() != m || !(spec.mixing_rates.is_empty() || spec.mixing_rates.len() == m)
    {
        return Err(Error::Shape(format!(
            "common unitary describes {} phase / {} mixing rates for a {m}-qubit register",
            spec.phase_rates.len(),
            spec.mixing_rates.len()
        )));
    }
    if !spec.duration.is_finite() {
        return Err(Error::Configuration("non-finite duration".into()));
    }
    let mut out = env.clone();
    for k in 0..m {
        apply_gate(&mut out, k, &spec.gate(k));
    }
    Ok(out)
}

/// Which-path distinguishability `sqrt(1 - |gamma|^2)`.
pub fn distinguishability(gamma: Complex64) -> Result<f64> {
    let mag = gamma.norm();
    if !(mag <= 1.0 + GAMMA_DOMAIN_TOLERANCE) {
        return Err(Error::Domain(format!("|gamma| = {mag} exceeds 1")));
    }
    Ok((1.0 - mag * mag).max(0.0).sqrt())
}
