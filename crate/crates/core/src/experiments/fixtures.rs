use crate::model::HyperbolicSystem;
use crate::solver::{Grid, StateField};

use super::sampling::{compact_bump, raised_cosine};

/// Two components, unit speeds, no coupling, full reflection `B = [1]`.
pub fn calibration_system() -> HyperbolicSystem {
    HyperbolicSystem::constant(1, 1, &[1.0, 1.0], true, &[vec![1.0]])
        .expect("calibration system is valid")
}

/// Raised cosine on the plus component, zero on the minus component.
pub fn calibration_initial_state(grid: &Grid) -> StateField {
    StateField::from_fn(1, 1, grid, |i, x| if i == 1 { raised_cosine(x) } else { 0.0 })
}

/// One minus and two plus components, speeds `(1, 1, 2)`, `B = [0.5, 1]`.
pub fn k1m2_system() -> HyperbolicSystem {
    HyperbolicSystem::constant(1, 2, &[1.0, 1.0, 2.0], true, &[vec![0.5, 1.0]])
        .expect("k1m2 system is valid")
}

/// Bumps at `0.3` (initial) and `0.6` (target) on every component.
pub fn k1m2_bumps(grid: &Grid) -> (StateField, StateField) {
    (
        StateField::from_fn(1, 2, grid, |_, x| compact_bump(x, 0.3, 0.2)),
        StateField::from_fn(1, 2, grid, |_, x| compact_bump(x, 0.6, 0.2)),
    )
}
