//! Time evolution of the center-of-mass wavefunction (units hbar = m = 1).
//!
//! Two routes are provided: the closed-form free Gaussian, used for the
//! two-path geometry, and a second-order (Strang) split-operator propagator
//! on the periodic grid for arbitrary external potentials.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::environment::{apply_recorder, initial_env, RecorderSpec};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::state::{check_same_grid, BranchState, GridWavefunction, PathLabel, TwoPathState};

/// Largest allowed ratio of edge density to peak density for an analytic packet.
pub const TRUNCATION_LIMIT: f64 = 1e-8;
/// Largest allowed ratio of Nyquist-mode spectral density to its peak.
pub const ALIASING_LIMIT: f64 = 1e-8;
/// Margin, in units of the evolved width, that the grid must leave around both slits.
pub const SLIT_MARGIN_WIDTHS: f64 = 6.0;

/// Initial Gaussian packet `exp(-(x-x0)^2 / (4 sigma^2) + i k0 (x-x0) + i phase)`.
///
/// `width` is the standard deviation of the position density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacketSpec {
    pub center: f64,
    pub momentum: f64,
    pub width: f64,
    pub global_phase: f64,
}

impl GaussianPacketSpec {
    pub fn new(center: f64, momentum: f64, width: f64) -> Result<Self> {
        let spec = GaussianPacketSpec { center, momentum, width, global_phase: 0.0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.global_phase = phase;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::Configuration(format!(
                "packet width must be positive (got {})",
                self.width
            )));
        }
        if !(self.center.is_finite() && self.momentum.is_finite() && self.global_phase.is_finite())
        {
            return Err(Error::Configuration("non-finite packet parameter".into()));
        }
        Ok(())
    }

    /// Position standard deviation after free evolution for time `t`.
    pub fn width_at(&self, t: f64) -> f64 {
        spread_width(self.width, t)
    }

    /// Closed-form amplitude at `(x, t)`.
    pub fn amplitude(&self, x: f64, t: f64) -> Complex64 {
        let s2 = self.width * self.width;
        let spread = Complex64::new(1.0, t / (2.0 * s2));
        let shifted = x - self.center - self.momentum * t;
        let pref = (2.0 * PI * s2).powf(-0.25) / spread.sqrt();
        let exponent = -shifted * shifted / (4.0 * s2 * spread)
            + Complex64::i()
                * (self.momentum * (x - self.center) - 0.5 * self.momentum * self.momentum * t
                    + self.global_phase);
        pref * exponent.exp()
    }
}

/// `sigma(t) = sigma0 sqrt(1 + (t / (2 sigma0^2))^2)`.
pub fn spread_width(sigma0: f64, t: f64) -> f64 {
    sigma0 * (1.0 + (t / (2.0 * sigma0 * sigma0)).powi(2)).sqrt()
}

fn edge_density_ratio(amplitudes: &[Complex64]) -> f64 {
    let peak = amplitudes.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
    let edge = amplitudes[0].norm_sqr().max(amplitudes[amplitudes.len() - 1].norm_sqr());
    if peak > 0.0 {
        edge / peak
    } else {
        f64::INFINITY
    }
}

/// Samples the freely evolved packet on `grid`, normalized on the grid.
pub fn free_gaussian_evolve(
    spec: &GaussianPacketSpec,
    t: f64,
    grid: &SpatialGrid,
) -> Result<GridWavefunction> {
    spec.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Configuration(format!("evolution time must be >= 0 (got {t})")));
    }
    let psi = GridWavefunction::from_fn(*grid, |x| spec.amplitude(x, t));
    let ratio = edge_density_ratio(psi.amplitudes());
    if !(ratio <= TRUNCATION_LIMIT) {
        return Err(Error::Truncation { ratio, limit: TRUNCATION_LIMIT });
    }
    psi.normalize()
}

/// Coherent state of the oscillator `V = omega^2 (x - center)^2 / 2`,
/// displaced by `displacement` at `t = 0` and evolved exactly for time `t`.
pub fn harmonic_coherent_state(
    grid: &SpatialGrid,
    omega: f64,
    center: f64,
    displacement: f64,
    t: f64,
) -> GridWavefunction {
    let xc = displacement * (omega * t).cos();
    let pc = -displacement * omega * (omega * t).sin();
    let pref = (omega / PI).powf(0.25);
    GridWavefunction::from_fn(*grid, |x| {
        let y = x - center;
        let re = -omega * (y - xc).powi(2) / 2.0;
        let im = pc * y - xc * pc / 2.0 - omega * t / 2.0;
        pref * Complex64::new(re, im).exp()
    })
}

/// Real external potential sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    grid: SpatialGrid,
    values: Vec<f64>,
}

impl PotentialSpec {
    pub fn zero(grid: &SpatialGrid) -> Self {
        PotentialSpec { grid: *grid, values: vec![0.0; grid.n_points()] }
    }

    /// `omega^2 (x - center)^2 / 2`.
    pub fn harmonic(grid: &SpatialGrid, omega: f64, center: f64) -> Self {
        let values = grid.points().map(|x| 0.5 * omega * omega * (x - center).powi(2)).collect();
        PotentialSpec { grid: *grid, values }
    }

    pub fn from_table(grid: &SpatialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::Shape(format!(
                "{} potential samples for a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Configuration("non-finite potential sample".into()));
        }
        Ok(PotentialSpec { grid: *grid, values })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Split-operator propagator with FFT plans prepared for one grid.
///
/// The grid is treated as periodic. One step is
/// `exp(-i V dt/2) exp(-i K dt) exp(-i V dt/2)` with `K = k^2 / 2`.
pub struct SplitStepPropagator {
    grid: SpatialGrid,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SplitStepPropagator {
    pub fn new(grid: &SpatialGrid) -> Self {
        let mut planner = FftPlanner::new();
        SplitStepPropagator {
            grid: *grid,
            wavenumbers: grid.wavenumbers(),
            forward: planner.plan_fft_forward(grid.n_points()),
            inverse: planner.plan_fft_inverse(grid.n_points()),
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    fn spectrum(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let mut buf = amplitudes.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    fn check_resolution(&self, amplitudes: &[Complex64]) -> Result<()> {
        let spec = self.spectrum(amplitudes);
        let peak = spec.iter().map(|a| a.norm_sqr()).fold(0.0, f64::max);
        let ratio = spec[self.grid.nyquist_index()].norm_sqr() / peak;
        if !(ratio <= ALIASING_LIMIT) {
            return Err(Error::Resolution { ratio, limit: ALIASING_LIMIT });
        }
        Ok(())
    }

    /// Spectral expectation value of the momentum operator.
    pub fn mean_momentum(&self, psi: &GridWavefunction) -> f64 {
        let spec = self.spectrum(psi.amplitudes());
        let (num, den) = spec
            .iter()
            .zip(&self.wavenumbers)
            .fold((0.0, 0.0), |(n, d), (a, k)| (n + k * a.norm_sqr(), d + a.norm_sqr()));
        num / den
    }

    /// Advances `psi` by `n_steps` steps of size `dt`. A negative `dt`
    /// runs the evolution backwards.
    pub fn evolve(
        &self,
        psi: &GridWavefunction,
        potential: &PotentialSpec,
        dt: f64,
        n_steps: usize,
    ) -> Result<GridWavefunction> {
        check_same_grid(&self.grid, psi.grid())?;
        check_same_grid(&self.grid, potential.grid())?;
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::Configuration(format!("time step must be non-zero (got {dt})")));
        }
        if n_steps == 0 {
            return Ok(psi.clone());
        }
        self.check_resolution(psi.amplitudes())?;

        let n = self.grid.n_points();
        let scale = 1.0 / n as f64;
        let half_potential: Vec<Complex64> = potential
            .values()
            .iter()
            .map(|v| Complex64::from_polar(1.0, -0.5 * v * dt))
            .collect();
        let full_potential: Vec<Complex64> = half_potential.iter().map(|h| h * h).collect();
        // the 1/N of the inverse transform is folded into the kinetic factor
        let kinetic: Vec<Complex64> = self
            .wavenumbers
            .iter()
            .map(|k| Complex64::from_polar(scale, -0.5 * k * k * dt))
            .collect();

        let mut buf = psi.amplitudes().to_vec();
        let mut scratch =
            vec![Complex64::new(0.0, 0.0); self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len())];
        multiply(&mut buf, &half_potential);
        for step in 0..n_steps {
            self.forward.process_with_scratch(&mut buf, &mut scratch);
            multiply(&mut buf, &kinetic);
            self.inverse.process_with_scratch(&mut buf, &mut scratch);
            if step + 1 < n_steps {
                multiply(&mut buf, &full_potential);
            }
        }
        multiply(&mut buf, &half_potential);

        self.check_resolution(&buf)?;
        GridWavefunction::new(self.grid, buf)
    }
}

fn multiply(buf: &mut [Complex64], factors: &[Complex64]) {
    for (a, f) in buf.iter_mut().zip(factors) {
        *a *= f;
    }
}

/// One-shot convenience wrapper around [`SplitStepPropagator::evolve`].
pub fn split_step(
    psi: &GridWavefunction,
    potential: &PotentialSpec,
    dt: f64,
    n_steps: usize,
) -> Result<GridWavefunction> {
    SplitStepPropagator::new(psi.grid()).evolve(psi, potential, dt, n_steps)
}

/// Symmetric two-slit geometry: equal Gaussian slits at `-d/2` (path A) and
/// `+d/2` (path B) with zero transverse momentum, observed after free
/// evolution for `propagation_time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSlitGeometry {
    slit_separation: f64,
    packet_width: f64,
    propagation_time: f64,
}

impl TwoSlitGeometry {
    pub fn new(slit_separation: f64, packet_width: f64, propagation_time: f64) -> Result<Self> {
        if !(slit_separation.is_finite() && slit_separation > 0.0) {
            return Err(Error::Configuration(format!(
                "slit separation must be positive (got {slit_separation})"
            )));
        }
        if !(packet_width.is_finite() && packet_width > 0.0) {
            return Err(Error::Configuration(format!(
                "packet width must be positive (got {packet_width})"
            )));
        }
        if !(propagation_time.is_finite() && propagation_time >= 0.0) {
            return Err(Error::Configuration(format!(
                "propagation time must be >= 0 (got {propagation_time})"
            )));
        }
        Ok(TwoSlitGeometry { slit_separation, packet_width, propagation_time })
    }

    pub fn slit_separation(&self) -> f64 {
        self.slit_separation
    }

    pub fn packet_width(&self) -> f64 {
        self.packet_width
    }

    pub fn propagation_time(&self) -> f64 {
        self.propagation_time
    }

    pub fn width_at_detection(&self) -> f64 {
        spread_width(self.packet_width, self.propagation_time)
    }

    /// Far-field fringe spacing `2 pi t / d`.
    pub fn far_field_fringe_spacing(&self) -> f64 {
        2.0 * PI * self.propagation_time / self.slit_separation
    }

    pub fn packet(&self, path: PathLabel) -> GaussianPacketSpec {
        let center = match path {
            PathLabel::A => -0.5 * self.slit_separation,
            PathLabel::B => 0.5 * self.slit_separation,
        };
        GaussianPacketSpec { center, momentum: 0.0, width: self.packet_width, global_phase: 0.0 }
    }

    /// Checks the grid leaves a margin of [`SLIT_MARGIN_WIDTHS`] evolved widths
    /// around both slits.
    pub fn check_grid(&self, grid: &SpatialGrid) -> Result<()> {
        let reach = 0.5 * self.slit_separation + SLIT_MARGIN_WIDTHS * self.width_at_detection();
        if grid.x_min() > -reach || grid.x_max() < reach {
            return Err(Error::Configuration(format!(
                "grid [{}, {}] does not cover [-{reach}, {reach}]",
                grid.x_min(),
                grid.x_max()
            )));
        }
        Ok(())
    }
}

/// How the branch wavefunctions are carried to the detection time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evolution {
    Analytic,
    SplitStep { dt: f64 },
}

/// Branch states of the two-slit experiment with the which-path record
/// written at the slits.
pub fn make_two_path_branches(
    geom: &TwoSlitGeometry,
    recorder: &RecorderSpec,
    grid: &SpatialGrid,
) -> Result<TwoPathState> {
    make_two_path_branches_with(geom, recorder, grid, Evolution::Analytic)
}

pub fn make_two_path_branches_with(
    geom: &TwoSlitGeometry,
    recorder: &RecorderSpec,
    grid: &SpatialGrid,
    evolution: Evolution,
) -> Result<TwoPathState> {
    geom.check_grid(grid)?;
    let t = geom.propagation_time();
    let spatial = |path: PathLabel| -> Result<GridWavefunction> {
        let packet = geom.packet(path);
        match evolution {
            Evolution::Analytic => free_gaussian_evolve(&packet, t, grid),
            Evolution::SplitStep { dt } => {
                let steps = step_count(t, dt)?;
                let initial = free_gaussian_evolve(&packet, 0.0, grid)?;
                split_step(&initial, &PotentialSpec::zero(grid), dt, steps)
            }
        }
    };
    let env0 = initial_env(recorder.n_qubits())?;
    let branch = |path: PathLabel| -> Result<BranchState> {
        BranchState::new(spatial(path)?, apply_recorder(&env0, recorder, path)?, path)
    };
    TwoPathState::new(branch(PathLabel::A)?, branch(PathLabel::B)?)
}

/// Number of steps of size `dt` covering `t`; `t` must be a whole multiple.
pub fn step_count(t: f64, dt: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Configuration(format!("time step must be positive (got {dt})")));
    }
    let steps = (t / dt).round();
    if (steps * dt - t).abs() > 1e-9 * t.max(1.0) {
        return Err(Error::Configuration(format!(
            "propagation time {t} is not a whole number of steps of {dt}"
        )));
    }
    Ok(steps as usize)
}
