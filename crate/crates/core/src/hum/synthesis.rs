use super::cg::conjugate_gradient;
use super::operators::{check_supported, Gramian};
use crate::error::{Error, Result};
use crate::model::{class_b_report, class_be_report, t_opt, HyperbolicSystem};
use crate::solver::{
    free_evolution, solve_primal, BoundaryQuadrature, ControlSignal, Grid, StateField,
    TrajectoryMode,
};

#[derive(Clone, Debug)]
pub struct HumOptions {
    /// Regularization relative to the estimated `‖Λ‖`.
    pub eps: f64,
    pub cg_tol: f64,
    pub cg_maxit: usize,
    /// Power iterations for the `‖Λ‖` estimate.
    pub norm_iters: usize,
    /// Allow w-form systems with nonzero coupling.
    pub experimental: bool,
    /// Dual quadrature; `Scheme` keeps the Gramian exactly symmetric.
    pub quadrature: BoundaryQuadrature,
}

impl Default for HumOptions {
    fn default() -> Self {
        Self {
            eps: 1e-6,
            cg_tol: 1e-8,
            cg_maxit: 500,
            norm_iters: 20,
            experimental: false,
            quadrature: BoundaryQuadrature::Scheme,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GramianReport {
    pub control: ControlSignal,
    /// HUM minimizer φ.
    pub multiplier: StateField,
    pub terminal: StateField,
    pub cg_iterations: usize,
    pub cg_residual: f64,
    pub cg_converged: bool,
    /// `‖w(T)‖` (null) or `‖w(T) − w_T‖` (exact), relative.
    pub terminal_residual_norm: f64,
    /// Absolute regularization actually used.
    pub eps: f64,
    pub gramian_norm: f64,
    pub warnings: Vec<String>,
}

fn horizon_warnings(system: &HyperbolicSystem, horizon: f64, warnings: &mut Vec<String>) -> Result<()> {
    let report = t_opt(system.speeds())?;
    if horizon <= report.t_opt {
        warnings.push(format!(
            "horizon {horizon} does not exceed the optimal time {}",
            report.t_opt
        ));
    }
    Ok(())
}

/// `min ½‖F_T* φ‖² + ½ eps ‖φ‖² − ⟨rhs, φ⟩`.
pub fn hum_objective(
    system: &HyperbolicSystem,
    phi: &StateField,
    rhs: &StateField,
    horizon: f64,
    grid: &Grid,
    eps: f64,
) -> Result<f64> {
    let op = Gramian::new(system, horizon, grid, eps, BoundaryQuadrature::Scheme)?;
    objective(&op, phi, rhs)
}

fn objective(op: &Gramian<'_>, phi: &StateField, rhs: &StateField) -> Result<f64> {
    let mut phi = phi.clone();
    phi.clear_unmeasured();
    let u = op.adjoint(&phi)?;
    Ok(0.5 * u.dot(&u) + 0.5 * op.eps * phi.dot(&phi) - rhs.dot(&phi))
}

fn synthesize(
    system: &HyperbolicSystem,
    w0: &StateField,
    target: Option<&StateField>,
    horizon: f64,
    grid: &Grid,
    options: &HumOptions,
    mut warnings: Vec<String>,
) -> Result<GramianReport> {
    check_supported(system, options.experimental)?;
    w0.check_shape(system.k(), system.m(), grid.nx())?;
    let free = free_evolution(system, w0, horizon, grid)?;
    let mut rhs = match target {
        Some(wt) => {
            wt.check_shape(system.k(), system.m(), grid.nx())?;
            wt.sub(&free)
        }
        None => free.scaled(-1.0),
    };
    rhs.clear_unmeasured();

    let plain = Gramian::new(system, horizon, grid, 0.0, options.quadrature)?;
    let gramian_norm = plain.norm_estimate(options.norm_iters)?;
    let eps = options.eps * gramian_norm.max(f64::MIN_POSITIVE);
    let op = Gramian { eps, ..plain };
    let cg = conjugate_gradient(&op, &rhs, options.cg_tol, options.cg_maxit)?;
    if !cg.converged {
        warnings.push(format!(
            "conjugate gradient stopped at the iteration cap {} with residual {:.3e}",
            options.cg_maxit, cg.residual
        ));
    }
    let control = op.adjoint(&cg.phi)?;
    let terminal = solve_primal(system, w0, &control, horizon, grid, TrajectoryMode::Off)?.terminal;
    let (miss, scale) = match target {
        Some(wt) => {
            let s = if wt.norm() > 0.0 { wt.norm() } else { w0.norm() };
            (terminal.sub(wt).norm(), s)
        }
        None => (terminal.norm(), w0.norm()),
    };
    let terminal_residual_norm = if scale > 0.0 { miss / scale } else { miss };
    Ok(GramianReport {
        control,
        multiplier: cg.phi,
        terminal,
        cg_iterations: cg.iterations,
        cg_residual: cg.residual,
        cg_converged: cg.converged,
        terminal_residual_norm,
        eps,
        gramian_norm,
        warnings,
    })
}

/// Penalized HUM control steering `w0` towards zero at `horizon`.
pub fn synthesize_null_control(
    system: &HyperbolicSystem,
    w0: &StateField,
    horizon: f64,
    grid: &Grid,
    options: &HumOptions,
) -> Result<GramianReport> {
    let mut warnings = Vec::new();
    horizon_warnings(system, horizon, &mut warnings)?;
    let b = class_b_report(system.boundary().matrix(), crate::model::Tolerances::default().det_tol);
    if !b.member {
        warnings.push(format!(
            "boundary matrix is not in class B (trailing minor of order {} singular)",
            b.failing_order.unwrap_or(0)
        ));
    }
    synthesize(system, w0, None, horizon, grid, options, warnings)
}

/// Penalized HUM control steering `w0` towards `wt` at `horizon`.
pub fn synthesize_exact_control(
    system: &HyperbolicSystem,
    w0: &StateField,
    wt: &StateField,
    horizon: f64,
    grid: &Grid,
    options: &HumOptions,
) -> Result<GramianReport> {
    if system.m() < system.k() {
        return Err(Error::Precondition(format!(
            "exact controllability needs m >= k, got k = {}, m = {}",
            system.k(),
            system.m()
        )));
    }
    let mut warnings = Vec::new();
    horizon_warnings(system, horizon, &mut warnings)?;
    let be = class_be_report(system.boundary().matrix(), crate::model::Tolerances::default().det_tol)?;
    if !be.member {
        warnings.push(format!(
            "boundary matrix is not in class Be (trailing minor of order {} singular)",
            be.failing_order.unwrap_or(0)
        ));
    }
    synthesize(system, w0, Some(wt), horizon, grid, options, warnings)
}
