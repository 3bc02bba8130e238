//! Parameter sweeps: independent runs on a bounded thread pool, assembled in
//! input order.

use std::fmt::Write as _;

use rayon::prelude::*;
use whichpath::Complex64;

use crate::config::Experiment;
use crate::run::{fmt17, simulate};
use crate::CliError;

pub const SWEEP_HEADER: &str = "param_value,gamma_re,gamma_im,visibility,distinguishability,purity,status";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub gamma: Complex64,
    pub visibility: Option<f64>,
    pub distinguishability: f64,
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<SweepPoint, String>,
}

pub fn run_point(exp: &Experiment) -> Result<SweepPoint, String> {
    let sim = simulate(exp, false).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = sim.checks.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
    if !failed.is_empty() {
        return Err(format!("failed checks: {}", failed.join(" ")));
    }
    Ok(SweepPoint {
        gamma: sim.gamma,
        visibility: sim.visibility.as_ref().map(|v| v.visibility),
        distinguishability: sim.distinguishability,
        purity: sim.purity(),
    })
}

/// Runs every point with at most `parallelism` concurrent runs. The returned
/// rows follow the order of `values`.
pub fn run_points(values: &[f64], experiments: &[Experiment], parallelism: usize) -> Result<Vec<SweepRow>, CliError> {
    assert_eq!(values.len(), experiments.len());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        values
            .par_iter()
            .zip(experiments.par_iter())
            .map(|(&value, exp)| SweepRow { value, outcome: run_point(exp) })
            .collect()
    }))
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        match &row.outcome {
            Ok(p) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},ok",
                    fmt17(row.value),
                    fmt17(p.gamma.re),
                    fmt17(p.gamma.im),
                    p.visibility.map(fmt17).unwrap_or_default(),
                    fmt17(p.distinguishability),
                    fmt17(p.purity),
                );
            }
            Err(msg) => {
                let msg = msg.replace([',', '\n', '\r'], ";");
                let _ = writeln!(out, "{},,,,,,error: {msg}", fmt17(row.value));
            }
        }
    }
    out
}
