//! Center-of-mass and relative coordinates of an N-particle object.

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Masses and positions of the particles making up a composite object.
#[derive(Debug, Clone, PartialEq)]
pub struct MassConfiguration {
    masses: Vec<f64>,
    positions: Vec<Vec3>,
}

impl MassConfiguration {
    pub fn new(masses: Vec<f64>, positions: Vec<Vec3>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::Configuration("no particles".into()));
        }
        if masses.len() != positions.len() {
            return Err(Error::Shape(format!(
                "{} masses but {} positions",
                masses.len(),
                positions.len()
            )));
        }
        if let Some(m) = masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::Configuration(format!("mass {m} is not strictly positive")));
        }
        if positions.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Configuration("non-finite particle position".into()));
        }
        Ok(MassConfiguration { masses, positions })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// Canonical coordinates `(X, q_2..q_N)` of a [`MassConfiguration`].
///
/// `q_1` is not independent and is recovered from the mass-weighted sum of
/// the stored relative positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComDecomposition {
    pub com: Vec3,
    pub relative: Vec<Vec3>,
    masses: Vec<f64>,
}

impl ComDecomposition {
    /// `q_1 = -sum_{a>=2} m_a q_a / m_1`.
    pub fn first_relative(&self) -> Vec3 {
        let mut q1 = [0.0; 3];
        for (m, q) in self.masses[1..].iter().zip(&self.relative) {
            for k in 0..3 {
                q1[k] -= m * q[k];
            }
        }
        q1.map(|v| v / self.masses[0])
    }

    /// Particle positions `x_a = X + q_a`.
    pub fn reconstruct(&self) -> Vec<Vec3> {
        std::iter::once(self.first_relative())
            .chain(self.relative.iter().copied())
            .map(|q| [self.com[0] + q[0], self.com[1] + q[1], self.com[2] + q[2]])
            .collect()
    }
}

pub fn com_decompose(cfg: &MassConfiguration) -> Result<ComDecomposition> {
    if cfg.is_empty() {
        return Err(Error::Configuration("no particles".into()));
    }
    let total = cfg.total_mass();
    let mut com = [0.0; 3];
    for (m, x) in cfg.masses.iter().zip(&cfg.positions) {
        for k in 0..3 {
            com[k] += m * x[k];
        }
    }
    let com = com.map(|v| v / total);
    let relative = cfg.positions[1..]
        .iter()
        .map(|x| [x[0] - com[0], x[1] - com[1], x[2] - com[2]])
        .collect();
    Ok(ComDecomposition { com, relative, masses: cfg.masses.clone() })
}
