//! Control operator, its adjoint, the HUM Gramian and control synthesis.
//!
//! The dual problem is posed on the forward time axis `(0, T)`: terminal data
//! is imposed at `t = T` and the sweep runs backwards.

mod cg;
mod observability;
mod operators;
mod synthesis;

pub use cg::{solve_gramian, CgOutcome};
pub use observability::{
    observability_constant, ObservabilityEstimate, ObservabilityOptions, ObservabilityVariant,
    QUOTIENT_FLOOR,
};
pub use operators::{apply_ft, apply_ft_star, apply_ft_star_with, gramian_apply};
pub use synthesis::{
    hum_objective, synthesize_exact_control, synthesize_null_control, GramianReport, HumOptions,
};

/// `‖F_T F_T*‖` by power iteration.
pub fn gramian_norm_estimate(
    system: &crate::model::HyperbolicSystem,
    horizon: f64,
    grid: &crate::solver::Grid,
    iterations: usize,
) -> crate::Result<f64> {
    operators::Gramian::new(system, horizon, grid, 0.0, crate::solver::BoundaryQuadrature::Scheme)?.norm_estimate(iterations)
}
