//! Two-path interference of a composite object whose internal degrees of
//! freedom act as an environment that may record which-path information.
//!
//! The center-of-mass wavefunction lives on a periodic 1-D grid
//! ([`GridWavefunction`]) and the internal environment is a dense qubit
//! register ([`EnvironmentState`]). Units are hbar = m = 1.

pub mod densmat;
pub mod environment;
pub mod error;
pub mod grid;
pub mod interference;
pub mod kinematics;
pub mod propagation;
pub mod state;

pub use num_complex::Complex64;

pub use densmat::{
    coherence_magnitude, purity, reduced_rho_closed_form, reduced_rho_partial_trace,
    ReducedDensityMatrix2,
};
pub use environment::{
    apply_common_unitary, apply_recorder, branch_overlap_after_recording, distinguishability,
    initial_env, CommonUnitarySpec, RecorderSpec,
};
pub use error::{Error, Result};
pub use grid::SpatialGrid;
pub use interference::{
    joint_pattern_bruteforce, measure_visibility, single_path_pattern, two_path_pattern,
    DetectionPattern, PatternKind, VisibilityReport,
};
pub use kinematics::{com_decompose, ComDecomposition, MassConfiguration, Vec3};
pub use propagation::{
    free_gaussian_evolve, make_two_path_branches, make_two_path_branches_with, split_step,
    Evolution, GaussianPacketSpec, PotentialSpec, SplitStepPropagator, TwoSlitGeometry,
};
pub use state::{
    inner_product_grid, overlap_env, BranchState, EnvironmentState, GridWavefunction, PathLabel,
    TwoPathState,
};
