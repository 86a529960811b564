use std::fmt;

use super::cg::conjugate_gradient;
use super::operators::{check_supported, Gramian};
use crate::error::Result;
use crate::model::HyperbolicSystem;
use crate::solver::{free_evolution, solve_dual_with, Grid};

/// Denominator of the observability inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObservabilityVariant {
    /// Dual state at the start of the horizon.
    Null,
    /// Terminal dual data.
    Exact,
}

impl fmt::Display for ObservabilityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Null => "null",
            Self::Exact => "exact",
        })
    }
}

impl std::str::FromStr for ObservabilityVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "null" => Ok(Self::Null),
            "exact" => Ok(Self::Exact),
            other => Err(format!("unknown variant '{other}', expected null or exact")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ObservabilityOptions {
    pub power_iters: usize,
    /// Relative change of the eigenvalue estimate at which iteration stops.
    pub inner_tol: f64,
    /// Shift relative to `‖Λ‖` keeping the inner solves well posed.
    pub eps: f64,
    pub cg_tol: f64,
    pub cg_maxit: usize,
    pub experimental: bool,
}

impl Default for ObservabilityOptions {
    fn default() -> Self {
        Self {
            power_iters: 30,
            inner_tol: 1e-4,
            eps: 1e-6,
            cg_tol: 1e-8,
            cg_maxit: 500,
            experimental: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ObservabilityEstimate {
    pub horizon: f64,
    pub constant_estimate: f64,
    pub method: ObservabilityVariant,
    pub iterations: usize,
    /// Relative change of the last eigenvalue update.
    pub residual: f64,
    pub converged: bool,
    /// The denominator vanished numerically; the estimate is the floor cap.
    pub degenerate: bool,
}

/// Reciprocal floor: quotients are never divided by less than this.
pub const QUOTIENT_FLOOR: f64 = 1e-14;

/// Estimate the best constant `C` in `‖F_T* v‖² ≥ C ‖denominator(v)‖²`.
pub fn observability_constant(
    system: &HyperbolicSystem,
    horizon: f64,
    grid: &Grid,
    variant: ObservabilityVariant,
    options: &ObservabilityOptions,
) -> Result<ObservabilityEstimate> {
    check_supported(system, options.experimental)?;
    let plain = Gramian::new(system, horizon, grid, 0.0, crate::solver::BoundaryQuadrature::Scheme)?;
    let norm = plain.norm_estimate(20)?;
    let eps = options.eps * norm.max(f64::MIN_POSITIVE);
    let op = Gramian { eps, ..plain };

    // Power iteration for the largest eigenvalue ν of (Λ + ε)⁻¹ M, where M is
    // the identity (exact) or Dᵀ D (null).
    let mut v = op.probe();
    v.scale(1.0 / v.norm());
    let mut nu = 0.0f64;
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    for it in 1..=options.power_iters.max(1) {
        iterations = it;
        let mv = match variant {
            ObservabilityVariant::Exact => v.clone(),
            ObservabilityVariant::Null => {
                let d = solve_dual_with(system, &v, horizon, grid, op.quadrature)?.initial;
                let mut back = free_evolution(system, &d, horizon, grid)?;
                back.clear_unmeasured();
                back
            }
        };
        if mv.norm() == 0.0 {
            nu = 0.0;
            change = 0.0;
            converged = true;
            break;
        }
        let w = conjugate_gradient(&op, &mv, options.cg_tol, options.cg_maxit)?.phi;
        // ⟨Aw, w⟩ / ⟨w, w⟩ in the (Λ + ε) inner product, A = (Λ + ε)⁻¹ M.
        let denom = mv.dot(&v);
        let next = if denom > 0.0 { (mv.dot(&w) / denom).max(0.0) } else { 0.0 };
        change = (next - nu).abs() / next.abs().max(f64::MIN_POSITIVE);
        nu = next;
        let n = w.norm();
        if !(n > 0.0) {
            break;
        }
        v = w.scaled(1.0 / n);
        if change <= options.inner_tol {
            converged = true;
            break;
        }
    }
    let (constant_estimate, degenerate) = match variant {
        ObservabilityVariant::Exact => ((1.0 / nu - eps).max(0.0), false),
        ObservabilityVariant::Null => {
            let degenerate = nu < QUOTIENT_FLOOR;
            (1.0 / nu.max(QUOTIENT_FLOOR), degenerate)
        }
    };
    Ok(ObservabilityEstimate {
        horizon,
        constant_estimate,
        method: variant,
        iterations,
        residual: if change.is_finite() { change } else { 1.0 },
        converged,
        degenerate,
    })
}
