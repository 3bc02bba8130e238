use thiserror::Error;

/// Errors raised by state construction, propagation and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Configuration(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degenerate state: norm is {0:e}")]
    DegenerateState(f64),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("grid too narrow: boundary density ratio {ratio:e} exceeds {limit:e}")]
    Truncation { ratio: f64, limit: f64 },
    #[error("insufficient grid resolution: Nyquist-edge spectral density ratio {ratio:e} exceeds {limit:e}")]
    Resolution { ratio: f64, limit: f64 },
    #[error("numerical consistency violated: {0}")]
    NumericalConsistency(String),
    #[error("fringes not resolved: found {maxima} maxima in the envelope region")]
    FringeResolution { maxima: usize },
    #[error("two-level basis invalid: |<psi_A|psi_B>| = {overlap:e} exceeds {limit:e}")]
    BasisValidity { overlap: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
