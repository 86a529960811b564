//! First-order upwind discretization of the primal and adjoint problems.
//!
//! Minus components travel right and enter through the reflection at
//! `x = 0`; plus components travel left and enter through the control at
//! `x = 1`. With a unit Courant number the transport part is an exact shift.

mod discretization;
mod dual;
mod export;
mod grid;
mod primal;
mod state;

pub use dual::{solve_dual, solve_dual_with, BoundaryQuadrature, DualSolution};
pub use export::{write_control_csv, write_state_csv, write_trajectory_csv};
pub use grid::{cfl_timestep, Grid, TimeLattice, MIN_CELLS};
pub use primal::{free_evolution, solve_primal, PrimalSolution, Trajectory, TrajectoryMode};
pub use state::{BoundaryTrace, ControlSignal, StateField};

#[cfg(test)]
mod tests;
