//! Uniform periodic grid for the center-of-mass (screen) coordinate.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform 1-D grid of `n_points` cells on `[x_min, x_max)`.
///
/// The right endpoint is excluded so the grid is consistent with the
/// periodic boundary used by the spectral propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(Error::Configuration(format!(
                "grid bounds must satisfy x_min < x_max (got {x_min}, {x_max})"
            )));
        }
        if n_points < Self::MIN_POINTS || !n_points.is_power_of_two() {
            return Err(Error::Configuration(format!(
                "grid size must be a power of two >= {} (got {n_points})",
                Self::MIN_POINTS
            )));
        }
        Ok(SpatialGrid { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n_points as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Angular wavenumbers in discrete Fourier transform order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let dk = 2.0 * PI / self.length();
        (0..n)
            .map(|j| if j < n / 2 { j } else { j - n })
            .map(|j| j as f64 * dk)
            .collect()
    }

    /// Index of the Nyquist mode in discrete Fourier transform order.
    pub fn nyquist_index(&self) -> usize {
        self.n_points / 2
    }

    pub fn same_as(&self, other: &SpatialGrid) -> bool {
        self == other
    }
}
