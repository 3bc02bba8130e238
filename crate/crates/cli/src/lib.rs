//! Configuration-driven front end for the `whichpath` simulator: single
//! runs, parameter sweeps and the invariant validation suite.

use std::path::{Path, PathBuf};

pub mod config;
pub mod run;
pub mod sweep;
pub mod validate;

/// Exit status for a successful command.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("consistency checks failed: {}", .0.join(", "))]
    FailedChecks(Vec<String>),
    #[error("{failed} of {total} sweep runs failed")]
    SweepFailures { failed: usize, total: usize },
    #[error("{0} invariant(s) failed")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numerical(_) | CliError::FailedChecks(_) | CliError::SweepFailures { .. } => {
                EXIT_NUMERICAL
            }
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

impl From<whichpath::Error> for CliError {
    fn from(e: whichpath::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// Resolves a configured output path: absolute paths are kept, relative ones
/// land under `output_dir` when given and the working directory otherwise.
pub fn resolve_output(output_dir: Option<&Path>, path: &Path) -> PathBuf {
    match output_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Loads, validates and runs one experiment, then writes the pattern CSV and
/// summary JSON. Nothing is written when loading, validation or simulation
/// fails. When a consistency check fails the files are still written (the
/// summary records which check failed) and the error is returned.
pub fn run_command(config_path: &Path, output_dir: Option<&Path>) -> Result<(PathBuf, PathBuf), CliError> {
    let cfg = config::ExperimentConfig::load(config_path)?;
    let exp = cfg.validate()?;
    let sim = run::simulate(&exp, true)?;
    let csv = run::pattern_csv(&sim);
    let json = run::Summary::from_simulation(&sim).to_json();
    let pattern_path = resolve_output(output_dir, &cfg.outputs.pattern);
    let summary_path = resolve_output(output_dir, &cfg.outputs.summary);
    write_file(&pattern_path, &csv)?;
    write_file(&summary_path, &json)?;
    let failed: Vec<String> =
        sim.checks.iter().filter(|(_, ok)| !**ok).map(|(name, _)| name.to_string()).collect();
    if failed.is_empty() {
        Ok((pattern_path, summary_path))
    } else {
        Err(CliError::FailedChecks(failed))
    }
}

/// Loads and validates a sweep, runs every point and writes the aggregate CSV.
/// Failed points are marked in the status column.
pub fn sweep_command(config_path: &Path, output_dir: Option<&Path>) -> Result<PathBuf, CliError> {
    let cfg = config::SweepConfig::load(config_path)?;
    let experiments = cfg.validate()?;
    let rows = sweep::run_points(&cfg.sweep.values, &experiments, cfg.sweep.parallelism)?;
    let path = resolve_output(output_dir, &cfg.sweep.output);
    write_file(&path, &sweep::sweep_csv(&rows))?;
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    if failed == 0 {
        Ok(path)
    } else {
        Err(CliError::SweepFailures { failed, total: rows.len() })
    }
}
