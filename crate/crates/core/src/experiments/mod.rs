//! Reproducible numerical studies. Each produces a [`StudyRecord`] holding
//! a CSV table, named scalar outputs and machine-checked assertions.

mod fixtures;
mod record;
pub mod sampling;
mod studies;

pub use fixtures::{calibration_initial_state, calibration_system, k1m2_bumps, k1m2_system};
pub use record::{system_fingerprint, Assertion, StudyRecord};
pub use studies::{
    adjoint_consistency_study, augmentation_limit_study, log_slope, null_control_convergence,
    observability_scan, russell_comparison,
};
