//! State types: the center-of-mass wavefunction, the internal-environment
//! register, single-path branches and the two-path superposition.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;

/// Tolerance used when a constructor requires an already-normalized factor.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Complex amplitudes of the center-of-mass coordinate on a [`SpatialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    grid: SpatialGrid,
    amplitudes: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn new(grid: SpatialGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::Shape(format!(
                "{} amplitudes for a {}-point grid",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        Ok(GridWavefunction { grid, amplitudes })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = grid.points().map(f).collect();
        GridWavefunction { grid, amplitudes }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Riemann sum of |psi|^2 dx.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DegenerateState(norm));
        }
        let amplitudes = self.amplitudes.iter().map(|a| a / norm).collect();
        Ok(GridWavefunction { grid: self.grid, amplitudes })
    }

    /// `<self|other>` as a Riemann sum.
    pub fn inner(&self, other: &GridWavefunction) -> Result<Complex64> {
        inner_product_grid(self, other)
    }

    /// First moment of the position density, `<X>`.
    pub fn mean_position(&self) -> f64 {
        let dx = self.grid.dx();
        let weighted: f64 = self
            .amplitudes
            .iter()
            .zip(self.grid.points())
            .map(|(a, x)| a.norm_sqr() * x)
            .sum();
        weighted * dx / self.norm_squared()
    }

    /// L2 distance `||self - other||` on the shared grid.
    pub fn l2_distance(&self, other: &GridWavefunction) -> Result<f64> {
        check_same_grid(&self.grid, &other.grid)?;
        let sum: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sum * self.grid.dx()).sqrt())
    }
}

pub(crate) fn check_same_grid(a: &SpatialGrid, b: &SpatialGrid) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::Shape(format!("grids differ: {a:?} vs {b:?}")))
    }
}

/// `<f|g> = sum_i conj(f_i) g_i dx`.
pub fn inner_product_grid(f: &GridWavefunction, g: &GridWavefunction) -> Result<Complex64> {
    check_same_grid(&f.grid, &g.grid)?;
    let sum: Complex64 = f
        .amplitudes
        .iter()
        .zip(&g.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(sum * f.grid.dx())
}

/// Dense state vector of an `n_qubits` recorder register.
///
/// Basis index bit `k` holds the state of qubit `k`. With zero qubits the
/// register is a single scalar amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl EnvironmentState {
    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Shape(format!(
                "register length {len} is not a power of two"
            )));
        }
        Ok(EnvironmentState { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    /// The computational basis state `|index>` of an `n_qubits` register.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n_qubits as u32)
            .filter(|_| n_qubits < usize::BITS as usize)
            .ok_or_else(|| Error::Capacity(format!("{n_qubits} qubits")))?;
        if index >= dim {
            return Err(Error::Shape(format!("basis index {index} >= dimension {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(EnvironmentState { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DegenerateState(norm));
        }
        let amplitudes = self.amplitudes.iter().map(|a| a / norm).collect();
        Ok(EnvironmentState { n_qubits: self.n_qubits, amplitudes })
    }
}

/// `gamma = <phi_b|phi_a> = sum_j conj(phi_b[j]) phi_a[j]`.
///
/// This is the quantity placed in the upper-right entry of the reduced
/// density matrix.
pub fn overlap_env(phi_a: &EnvironmentState, phi_b: &EnvironmentState) -> Result<Complex64> {
    if phi_a.n_qubits != phi_b.n_qubits {
        return Err(Error::Shape(format!(
            "register sizes differ: {} vs {} qubits",
            phi_a.n_qubits, phi_b.n_qubits
        )));
    }
    Ok(phi_a
        .amplitudes
        .iter()
        .zip(&phi_b.amplitudes)
        .map(|(a, b)| b.conj() * a)
        .sum())
}

/// Which of the two paths a branch travels along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathLabel {
    A,
    B,
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathLabel::A => f.write_str("A"),
            PathLabel::B => f.write_str("B"),
        }
    }
}

/// Factorized state `psi(X) Phi(q)` of one path.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchState {
    psi: GridWavefunction,
    phi: EnvironmentState,
    label: PathLabel,
}

impl BranchState {
    pub fn new(psi: GridWavefunction, phi: EnvironmentState, label: PathLabel) -> Result<Self> {
        let psi_dev = (psi.norm_squared() - 1.0).abs();
        let phi_dev = (phi.norm_squared() - 1.0).abs();
        if !(psi_dev <= NORM_TOLERANCE) {
            return Err(Error::NumericalConsistency(format!(
                "branch {label}: spatial factor norm^2 deviates from 1 by {psi_dev:e}"
            )));
        }
        if !(phi_dev <= NORM_TOLERANCE) {
            return Err(Error::NumericalConsistency(format!(
                "branch {label}: environment norm^2 deviates from 1 by {phi_dev:e}"
            )));
        }
        Ok(BranchState { psi, phi, label })
    }

    pub fn psi(&self) -> &GridWavefunction {
        &self.psi
    }

    pub fn phi(&self) -> &EnvironmentState {
        &self.phi
    }

    pub fn label(&self) -> PathLabel {
        self.label
    }
}

/// Equal-weight superposition `(Psi_A + Psi_B) / sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPathState {
    branch_a: BranchState,
    branch_b: BranchState,
}

impl TwoPathState {
    pub fn new(branch_a: BranchState, branch_b: BranchState) -> Result<Self> {
        if branch_a.label != PathLabel::A || branch_b.label != PathLabel::B {
            return Err(Error::Configuration(format!(
                "branches must be labelled (A, B), got ({}, {})",
                branch_a.label, branch_b.label
            )));
        }
        check_same_grid(branch_a.psi.grid(), branch_b.psi.grid())?;
        if branch_a.phi.n_qubits != branch_b.phi.n_qubits {
            return Err(Error::Shape(format!(
                "branch registers differ: {} vs {} qubits",
                branch_a.phi.n_qubits, branch_b.phi.n_qubits
            )));
        }
        Ok(TwoPathState { branch_a, branch_b })
    }

    pub fn branch_a(&self) -> &BranchState {
        &self.branch_a
    }

    pub fn branch_b(&self) -> &BranchState {
        &self.branch_b
    }

    pub fn grid(&self) -> &SpatialGrid {
        self.branch_a.psi.grid()
    }

    pub fn n_qubits(&self) -> usize {
        self.branch_a.phi.n_qubits
    }

    /// Environment overlap `<Phi_B|Phi_A>`.
    pub fn gamma(&self) -> Complex64 {
        overlap_env(&self.branch_a.phi, &self.branch_b.phi)
            .expect("register sizes checked at construction")
    }

    /// Spatial overlap `<psi_A|psi_B>`.
    pub fn spatial_overlap(&self) -> Complex64 {
        inner_product_grid(&self.branch_a.psi, &self.branch_b.psi)
            .expect("grids checked at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gaussian(grid: SpatialGrid, center: f64, sigma: f64) -> GridWavefunction {
        let pref = (2.0 * PI * sigma * sigma).powf(-0.25);
        GridWavefunction::from_fn(grid, |x| {
            c(pref * (-(x - center).powi(2) / (4.0 * sigma * sigma)).exp(), 0.0)
        })
    }

    #[test]
    fn self_overlap_of_normalized_wavefunction_is_one() {
        let grid = SpatialGrid::new(-20.0, 20.0, 512).unwrap();
        let f = gaussian(grid, 0.3, 1.2).normalize().unwrap();
        let v = inner_product_grid(&f, &f).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn disjoint_boxes_are_orthogonal() {
        let grid = SpatialGrid::new(-8.0, 8.0, 64).unwrap();
        let left = GridWavefunction::from_fn(grid, |x| c(if x < -2.0 { 1.0 } else { 0.0 }, 0.0))
            .normalize()
            .unwrap();
        let right = GridWavefunction::from_fn(grid, |x| c(if x > 2.0 { 1.0 } else { 0.0 }, 0.0))
            .normalize()
            .unwrap();
        assert_eq!(inner_product_grid(&left, &right).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn gaussian_overlap_matches_closed_form() {
        // <g_0|g_d> = exp(-d^2 / (8 sigma^2)) for unit-normalized Gaussians.
        let grid = SpatialGrid::new(-30.0, 30.0, 1024).unwrap();
        let f = gaussian(grid, 0.0, 1.0);
        let g = gaussian(grid, 2.0, 1.0);
        let v = inner_product_grid(&f, &g).unwrap();
        assert!((v.re - (-0.5f64).exp()).abs() < 1e-6, "{v}");
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let f = gaussian(SpatialGrid::new(-10.0, 10.0, 64).unwrap(), 0.0, 1.0);
        let g = gaussian(SpatialGrid::new(-10.0, 10.0, 128).unwrap(), 0.0, 1.0);
        assert!(matches!(inner_product_grid(&f, &g), Err(Error::Shape(_))));
        assert!(matches!(f.l2_distance(&g), Err(Error::Shape(_))));
    }

    #[test]
    fn env_overlap_examples() {
        let zero = EnvironmentState::basis(1, 0).unwrap();
        let one = EnvironmentState::basis(1, 1).unwrap();
        assert_eq!(overlap_env(&zero, &zero).unwrap(), c(1.0, 0.0));
        assert_eq!(overlap_env(&zero, &one).unwrap(), c(0.0, 0.0));
        let two = EnvironmentState::basis(2, 0).unwrap();
        assert!(matches!(overlap_env(&zero, &two), Err(Error::Shape(_))));
    }

    #[test]
    fn env_overlap_convention_is_bra_b_ket_a() {
        let a = EnvironmentState::from_amplitudes(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let b = EnvironmentState::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        // <b|a> = conj(1) * i = i
        assert_eq!(overlap_env(&a, &b).unwrap(), c(0.0, 1.0));
    }

    #[test]
    fn normalize_uniform_register() {
        let m = 3;
        let raw = EnvironmentState::from_amplitudes(vec![c(2.0, 0.0); 1 << m]).unwrap();
        let n = raw.normalize().unwrap();
        let expected = 2f64.powf(-(m as f64) / 2.0);
        for a in n.amplitudes() {
            assert!((a.re - expected).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn normalize_is_idempotent_on_normalized_gaussian() {
        let grid = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
        let g = gaussian(grid, 0.0, 1.0).normalize().unwrap();
        let again = g.normalize().unwrap();
        for (a, b) in g.amplitudes().iter().zip(again.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_norm_is_degenerate() {
        let grid = SpatialGrid::new(-1.0, 1.0, 8).unwrap();
        let z = GridWavefunction::new(grid, vec![c(0.0, 0.0); 8]).unwrap();
        assert!(matches!(z.normalize(), Err(Error::DegenerateState(_))));
        let e = EnvironmentState::from_amplitudes(vec![c(0.0, 0.0); 4]).unwrap();
        assert!(matches!(e.normalize(), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn register_length_must_be_power_of_two() {
        assert!(EnvironmentState::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        assert!(EnvironmentState::from_amplitudes(vec![]).is_err());
        assert_eq!(EnvironmentState::from_amplitudes(vec![c(1.0, 0.0)]).unwrap().n_qubits(), 0);
    }

    #[test]
    fn two_path_state_checks_labels_and_shapes() {
        let grid = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
        let psi = gaussian(grid, 0.0, 1.0).normalize().unwrap();
        let phi = EnvironmentState::basis(1, 0).unwrap();
        let a = BranchState::new(psi.clone(), phi.clone(), PathLabel::A).unwrap();
        let b = BranchState::new(psi.clone(), phi.clone(), PathLabel::B).unwrap();
        assert!(TwoPathState::new(b.clone(), a.clone()).is_err());
        let b2 = BranchState::new(psi.clone(), EnvironmentState::basis(2, 0).unwrap(), PathLabel::B)
            .unwrap();
        assert!(matches!(TwoPathState::new(a.clone(), b2), Err(Error::Shape(_))));
        assert!(TwoPathState::new(a, b).is_ok());
        let unnormalized = GridWavefunction::new(grid, vec![c(1.0, 0.0); 256]).unwrap();
        assert!(BranchState::new(unnormalized, phi, PathLabel::A).is_err());
    }
}
