//! Reduced 2x2 density matrix in the branch basis `(|psi_A>, |psi_B>)`.
//!
//! Convention: the upper-right entry is `gamma / 2` with
//! `gamma = <Phi_B|Phi_A>`, the lower-left its conjugate.

use num_complex::Complex64;

use crate::environment::GAMMA_DOMAIN_TOLERANCE;
use crate::error::{Error, Result};
use crate::state::TwoPathState;

/// Tolerance for Hermiticity, unit trace and the eigenvalue floor.
pub const MATRIX_TOLERANCE: f64 = 1e-12;
/// Largest `|<psi_A|psi_B>|` for which the branches are treated as an
/// orthonormal two-level basis.
pub const BASIS_ORTHOGONALITY_LIMIT: f64 = 1e-6;
/// Largest register traced out by [`reduced_rho_partial_trace`].
pub const PARTIAL_TRACE_MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensityMatrix2 {
    entries: [[Complex64; 2]; 2],
}

impl ReducedDensityMatrix2 {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let rho = ReducedDensityMatrix2 { entries };
        let herm = (entries[0][1] - entries[1][0].conj())
            .norm()
            .max(entries[0][0].im.abs())
            .max(entries[1][1].im.abs());
        if !(herm <= MATRIX_TOLERANCE) {
            return Err(Error::NumericalConsistency(format!(
                "density matrix is not Hermitian (residual {herm:e})"
            )));
        }
        let trace = rho.trace();
        if !((trace - 1.0).abs() <= MATRIX_TOLERANCE) {
            return Err(Error::NumericalConsistency(format!("density matrix trace {trace}")));
        }
        let [low, high] = rho.eigenvalues();
        if !(low >= -MATRIX_TOLERANCE && high <= 1.0 + MATRIX_TOLERANCE) {
            return Err(Error::NumericalConsistency(format!(
                "density matrix eigenvalues {low}, {high} outside [0, 1]"
            )));
        }
        Ok(rho)
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (a, d) = (self.entries[0][0].re, self.entries[1][1].re);
        let b = self.entries[0][1];
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - radius, mean + radius]
    }

    pub fn square(&self) -> [[Complex64; 2]; 2] {
        let e = &self.entries;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = e[i][0] * e[0][j] + e[i][1] * e[1][j];
            }
        }
        out
    }

    /// Largest entrywise difference to another matrix.
    pub fn max_abs_difference(&self, other: &ReducedDensityMatrix2) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `rho = 1/2 [[1, gamma], [conj(gamma), 1]]`.
pub fn reduced_rho_closed_form(gamma: Complex64) -> Result<ReducedDensityMatrix2> {
    if !(gamma.norm() <= 1.0 + GAMMA_DOMAIN_TOLERANCE) {
        return Err(Error::Domain(format!("|gamma| = {} exceeds 1", gamma.norm())));
    }
    let half = Complex64::new(0.5, 0.0);
    Ok(ReducedDensityMatrix2 { entries: [[half, 0.5 * gamma], [0.5 * gamma.conj(), half]] })
}

/// Traces the environment out of `|Psi><Psi|` one basis state at a time.
///
/// In the branch basis the joint state has coefficients
/// `c[k][j] = Phi_k(j) / sqrt(2)` for `k` in `{A, B}`, so each environment
/// basis state `|q_j>` contributes `c[k][j] conj(c[l][j])` to entry `(k, l)`.
pub fn reduced_rho_partial_trace(state: &TwoPathState) -> Result<ReducedDensityMatrix2> {
    if state.n_qubits() > PARTIAL_TRACE_MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "partial trace limited to {PARTIAL_TRACE_MAX_QUBITS} qubits"
        )));
    }
    let overlap = state.spatial_overlap().norm();
    if !(overlap <= BASIS_ORTHOGONALITY_LIMIT) {
        return Err(Error::BasisValidity { overlap, limit: BASIS_ORTHOGONALITY_LIMIT });
    }
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let phi = [state.branch_a().phi().amplitudes(), state.branch_b().phi().amplitudes()];
    let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
    for j in 0..phi[0].len() {
        let column = [phi[0][j] * norm, phi[1][j] * norm];
        for (k, row) in entries.iter_mut().enumerate() {
            for (l, slot) in row.iter_mut().enumerate() {
                *slot += column[k] * column[l].conj();
            }
        }
    }
    ReducedDensityMatrix2::new(entries)
}

/// `Tr(rho^2)`.
pub fn purity(rho: &ReducedDensityMatrix2) -> f64 {
    let sq = rho.square();
    sq[0][0].re + sq[1][1].re
}

/// `2 |rho_AB|`, which equals `|gamma|`.
pub fn coherence_magnitude(rho: &ReducedDensityMatrix2) -> f64 {
    2.0 * rho.entries[0][1].norm()
}
