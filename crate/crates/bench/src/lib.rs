//! Shared fixtures for the criterion benchmarks.

use whichpath::{make_two_path_branches, RecorderSpec, SpatialGrid, TwoPathState, TwoSlitGeometry};

/// Two-slit state on the default far-field grid with an `m`-qubit recorder.
pub fn far_field_state(m: usize, kick_angle: f64) -> TwoPathState {
    let geometry = TwoSlitGeometry::new(16.0, 1.0, 600.0).expect("geometry");
    let grid = SpatialGrid::new(-2048.0, 2048.0, 1 << 15).expect("grid");
    make_two_path_branches(&geometry, &RecorderSpec::new(m, kick_angle).expect("recorder"), &grid)
        .expect("branches")
}

/// Small near-field state for the brute-force joint marginal.
pub fn small_state(m: usize, kick_angle: f64) -> TwoPathState {
    let geometry = TwoSlitGeometry::new(6.0, 1.0, 2.0).expect("geometry");
    let grid = SpatialGrid::new(-32.0, 32.0, 512).expect("grid");
    make_two_path_branches(&geometry, &RecorderSpec::new(m, kick_angle).expect("recorder"), &grid)
        .expect("branches")
}
