//! Strict TOML configuration for runs and sweeps.
//!
//! Physics parameters (geometry and recorder) have no defaults; grid,
//! numerics and output paths do.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use whichpath::interference::DEFAULT_ENVELOPE_THRESHOLD;
use whichpath::propagation::{step_count, TRUNCATION_LIMIT};
use whichpath::{Evolution, PathLabel, RecorderSpec, SpatialGrid, TwoSlitGeometry};

use crate::CliError;

pub const DEFAULT_X_MIN: f64 = -2048.0;
pub const DEFAULT_X_MAX: f64 = 2048.0;
pub const DEFAULT_N_POINTS: usize = 1 << 15;
pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub slit_separation: f64,
    pub packet_width: f64,
    pub propagation_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum PathName {
    A,
    B,
}

impl From<PathName> for PathLabel {
    fn from(p: PathName) -> Self {
        match p {
            PathName::A => PathLabel::A,
            PathName::B => PathLabel::B,
        }
    }
}

fn default_path() -> PathName {
    PathName::B
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecorderConfig {
    pub n_qubits: usize,
    pub kick_angle: f64,
    #[serde(default = "default_path")]
    pub record_on_path: PathName,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { x_min: DEFAULT_X_MIN, x_max: DEFAULT_X_MAX, n_points: DEFAULT_N_POINTS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionMode {
    Analytic,
    SplitStep,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub evolution: EvolutionMode,
    pub dt: f64,
    pub envelope_threshold: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            evolution: EvolutionMode::Analytic,
            dt: DEFAULT_DT,
            envelope_threshold: DEFAULT_ENVELOPE_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputsConfig {
    pub pattern: PathBuf,
    pub summary: PathBuf,
}

impl Default for OutputsConfig {
    fn default() -> Self {
        OutputsConfig { pattern: "pattern.csv".into(), summary: "summary.json".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometryConfig,
    pub recorder: RecorderConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

/// Validated simulation inputs built from an [`ExperimentConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub geometry: TwoSlitGeometry,
    pub recorder: RecorderSpec,
    pub grid: SpatialGrid,
    pub evolution: Evolution,
    pub envelope_threshold: f64,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks every parameter and returns the core inputs. Nothing is
    /// simulated here beyond evaluating the packets at the grid edges.
    pub fn validate(&self) -> Result<Experiment, CliError> {
        let cfg = |e: whichpath::Error| CliError::Config(e.to_string());
        let geometry = TwoSlitGeometry::new(
            self.geometry.slit_separation,
            self.geometry.packet_width,
            self.geometry.propagation_time,
        )
        .map_err(cfg)?;
        let recorder = RecorderSpec::recording_on(
            self.recorder.n_qubits,
            self.recorder.kick_angle,
            self.recorder.record_on_path.into(),
        )
        .map_err(cfg)?;
        let grid = SpatialGrid::new(self.grid.x_min, self.grid.x_max, self.grid.n_points)
            .map_err(cfg)?;
        geometry.check_grid(&grid).map_err(cfg)?;
        let t = geometry.propagation_time();
        for path in [PathLabel::A, PathLabel::B] {
            let packet = geometry.packet(path);
            let peak = packet.amplitude(packet.center, t).norm_sqr();
            let edge = packet
                .amplitude(grid.x_min(), t)
                .norm_sqr()
                .max(packet.amplitude(grid.x(grid.n_points() - 1), t).norm_sqr());
            if !(edge <= TRUNCATION_LIMIT * peak) {
                return Err(CliError::Config(format!(
                    "grid too narrow for path {path}: edge density ratio {:e}",
                    edge / peak
                )));
            }
        }
        let threshold = self.numerics.envelope_threshold;
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(CliError::Config(format!("envelope_threshold {threshold} outside (0, 1)")));
        }
        let evolution = match self.numerics.evolution {
            EvolutionMode::Analytic => Evolution::Analytic,
            EvolutionMode::SplitStep => {
                step_count(t, self.numerics.dt).map_err(cfg)?;
                Evolution::SplitStep { dt: self.numerics.dt }
            }
        };
        Ok(Experiment { geometry, recorder, grid, evolution, envelope_threshold: threshold })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    KickAngle,
    NQubits,
    SlitSeparation,
}

impl SweepParameter {
    pub fn apply(&self, base: &ExperimentConfig, value: f64) -> Result<ExperimentConfig, CliError> {
        let mut cfg = base.clone();
        match self {
            SweepParameter::KickAngle => cfg.recorder.kick_angle = value,
            SweepParameter::NQubits => {
                if !(value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(CliError::Config(format!(
                        "n_qubits sweep value {value} is not a non-negative integer"
                    )));
                }
                cfg.recorder.n_qubits = value as usize;
            }
            SweepParameter::SlitSeparation => cfg.geometry.slit_separation = value,
        }
        Ok(cfg)
    }
}

fn default_parallelism() -> usize {
    1
}

fn default_sweep_output() -> PathBuf {
    "sweep.csv".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default = "default_sweep_output")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sweep: SweepSection,
    pub base: ExperimentConfig,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Validates the sweep and every point it expands to.
    pub fn validate(&self) -> Result<Vec<Experiment>, CliError> {
        if self.sweep.values.is_empty() {
            return Err(CliError::Config("sweep has no values".into()));
        }
        if self.sweep.parallelism == 0 {
            return Err(CliError::Config("parallelism must be at least 1".into()));
        }
        self.sweep
            .values
            .iter()
            .map(|&v| {
                self.sweep.parameter.apply(&self.base, v)?.validate().map_err(|e| match e {
                    CliError::Config(msg) => CliError::Config(format!("sweep value {v}: {msg}")),
                    other => other,
                })
            })
            .collect()
    }
}
