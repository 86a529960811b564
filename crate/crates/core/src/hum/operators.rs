use crate::error::{Error, Result};
use crate::model::{Coupling, HyperbolicSystem};
use crate::solver::{
    solve_dual_with, solve_primal, BoundaryQuadrature, ControlSignal, Grid, StateField,
    TrajectoryMode,
};

/// Reject systems whose dual is not officially supported unless the caller
/// opts in.
pub(crate) fn check_supported(system: &HyperbolicSystem, experimental: bool) -> Result<()> {
    match system.coupling() {
        Coupling::WForm(c) if !c.is_zero() && !experimental => Err(Error::Precondition(
            "HUM on w-form systems with nonzero C requires the experimental flag".into(),
        )),
        _ => Ok(()),
    }
}

/// Control-to-state map from zero initial data.
pub fn apply_ft(
    system: &HyperbolicSystem,
    control: &ControlSignal,
    horizon: f64,
    grid: &Grid,
) -> Result<StateField> {
    let w0 = StateField::zeros(system.k(), system.m(), grid.nx());
    let mut w = solve_primal(system, &w0, control, horizon, grid, TrajectoryMode::Off)?.terminal;
    w.clear_unmeasured();
    Ok(w)
}

/// Adjoint of [`apply_ft`]: the dual trace for terminal data `v`.
pub fn apply_ft_star(
    system: &HyperbolicSystem,
    v: &StateField,
    horizon: f64,
    grid: &Grid,
) -> Result<ControlSignal> {
    apply_ft_star_with(system, v, horizon, grid, BoundaryQuadrature::default())
}

pub fn apply_ft_star_with(
    system: &HyperbolicSystem,
    v: &StateField,
    horizon: f64,
    grid: &Grid,
    quadrature: BoundaryQuadrature,
) -> Result<ControlSignal> {
    Ok(solve_dual_with(system, v, horizon, grid, quadrature)?.trace)
}

/// `(F_T F_T* + eps) v`.
pub fn gramian_apply(
    system: &HyperbolicSystem,
    v: &StateField,
    horizon: f64,
    grid: &Grid,
    eps: f64,
) -> Result<StateField> {
    Gramian::new(system, horizon, grid, eps, BoundaryQuadrature::Scheme)?.apply(v)
}

/// Gramian bound to one system, horizon and grid.
pub(crate) struct Gramian<'a> {
    pub system: &'a HyperbolicSystem,
    pub grid: &'a Grid,
    pub horizon: f64,
    pub eps: f64,
    pub quadrature: BoundaryQuadrature,
}

impl<'a> Gramian<'a> {
    pub fn new(
        system: &'a HyperbolicSystem,
        horizon: f64,
        grid: &'a Grid,
        eps: f64,
        quadrature: BoundaryQuadrature,
    ) -> Result<Self> {
        if !(eps >= 0.0) {
            return Err(Error::Precondition(format!("eps must be nonnegative, got {eps}")));
        }
        grid.lattice_for(system.speeds(), horizon)?;
        Ok(Self {
            system,
            grid,
            horizon,
            eps,
            quadrature,
        })
    }

    pub fn zeros(&self) -> StateField {
        StateField::zeros(self.system.k(), self.system.m(), self.grid.nx())
    }

    pub fn adjoint(&self, v: &StateField) -> Result<ControlSignal> {
        apply_ft_star_with(self.system, v, self.horizon, self.grid, self.quadrature)
    }

    pub fn forward(&self, u: &ControlSignal) -> Result<StateField> {
        apply_ft(self.system, u, self.horizon, self.grid)
    }

    pub fn apply(&self, v: &StateField) -> Result<StateField> {
        let mut v = v.clone();
        v.clear_unmeasured();
        let mut out = self.forward(&self.adjoint(&v)?)?;
        if self.eps > 0.0 {
            out.add_scaled(self.eps, &v);
        }
        Ok(out)
    }

    /// Deterministic start vector with content in many modes.
    pub fn probe(&self) -> StateField {
        let mut v = StateField::from_fn(self.system.k(), self.system.m(), self.grid, |i, x| {
            let s = i as f64 + 1.0;
            1.0 + (7.0 * s * x + 0.3 * s).sin() + 0.5 * (23.0 * x * s).cos()
        });
        v.clear_unmeasured();
        v
    }

    /// Power iteration for the largest eigenvalue of `F_T F_T*`.
    pub fn norm_estimate(&self, iterations: usize) -> Result<f64> {
        let plain = Gramian { eps: 0.0, ..*self };
        let mut v = self.probe();
        let n = v.norm();
        v.scale(1.0 / n);
        let mut estimate = 0.0;
        for _ in 0..iterations.max(1) {
            let w = plain.apply(&v)?;
            estimate = w.dot(&v);
            let n = w.norm();
            if !(n > 0.0) {
                return Ok(0.0);
            }
            v = w.scaled(1.0 / n);
        }
        Ok(estimate)
    }
}
