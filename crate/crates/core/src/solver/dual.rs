use ndarray::Array2;

use super::discretization::{Discretization, Source};
use super::grid::Grid;
use super::state::{BoundaryTrace, ControlSignal, StateField};
use crate::error::{Error, Result};
use crate::model::HyperbolicSystem;

/// Quadrature for the nonlocal term `∫ S(x)ᵀ v(t, x) dx` in the dual
/// boundary condition at `x = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundaryQuadrature {
    /// Trapezoid rule over all nodes.
    #[default]
    Trapezoid,
    /// The one-sided sum matching the primal source; makes the dual sweep
    /// the exact transpose of the primal scheme.
    Scheme,
}

#[derive(Clone, Debug)]
pub struct DualSolution {
    /// `v(0, ·)`.
    pub initial: StateField,
    /// Outgoing trace `Σ_+(1) v_+(t, 1)` on the time lattice.
    pub trace: BoundaryTrace,
}

fn extrapolate_unmeasured(d: &Discretization, z: &mut Array2<f64>) {
    let nx = d.nx;
    for i in 0..d.k {
        z[[i, 0]] = z[[i, 1]];
    }
    for p in 0..d.m {
        z[[d.k + p, nx]] = z[[d.k + p, nx - 1]];
    }
}

fn outgoing(d: &Discretization, z: &Array2<f64>, p: usize) -> f64 {
    let row = d.k + p;
    d.dx / d.dt * d.courant[row][d.nx - 1] * z[[row, d.nx - 1]]
}

fn back_step(
    d: &Discretization,
    quadrature: BoundaryQuadrature,
    z: &Array2<f64>,
    out: &mut Array2<f64>,
    trace: &mut [f64],
) {
    let (k, m, n, nx, dt, dx) = (d.k, d.m, d.n(), d.nx, d.dt, d.dx);
    for (p, t) in trace.iter_mut().enumerate().take(m) {
        *t = outgoing(d, z, p);
    }
    for i in 0..n {
        let c = &d.courant[i];
        let zi = z.row(i);
        let zi = zi.as_slice().expect("contiguous");
        let mut oi = out.row_mut(i);
        let oi = oi.as_slice_mut().expect("contiguous");
        if i < k {
            for j in 1..nx {
                oi[j] = (1.0 - c[j]) * zi[j] + c[j + 1] * zi[j + 1];
            }
            oi[nx] = (1.0 - c[nx]) * zi[nx];
        } else {
            for j in 1..nx {
                oi[j] = (1.0 - c[j]) * zi[j] + c[j - 1] * zi[j - 1];
            }
            oi[0] = (1.0 - c[0]) * zi[0];
        }
    }
    // Reflection at x = 0 feeds the plus family's first node.
    for p in 0..m {
        out[[k + p, 0]] += (0..k)
            .map(|i| d.b[(i, p)] * d.courant[i][1] * z[[i, 1]])
            .sum::<f64>();
    }
    match &d.source {
        Source::None => {}
        Source::Boundary(s) => {
            for p in 0..m {
                let mut acc = 0.0;
                for j in 0..=nx {
                    let sj = &s[j];
                    let local: f64 = match quadrature {
                        BoundaryQuadrature::Trapezoid => {
                            let w = if j == 0 || j == nx { 0.5 } else { 1.0 };
                            w * (0..n).map(|a| sj[a * m + p] * z[[a, j]]).sum::<f64>()
                        }
                        BoundaryQuadrature::Scheme => (0..n)
                            .filter(|&a| if a < k { j != 0 } else { j != nx })
                            .map(|a| sj[a * m + p] * z[[a, j]])
                            .sum(),
                    };
                    acc += local;
                }
                out[[k + p, 0]] += dt * acc;
            }
        }
        Source::Local(c) => {
            let measured = |a: usize, j: usize| if a < k { j != 0 } else { j != nx };
            for j in 0..=nx {
                let cj = &c[j];
                for b in 0..n {
                    let v: f64 = (0..n)
                        .filter(|&a| measured(a, j))
                        .map(|a| cj[a * n + b] * z[[a, j]])
                        .sum();
                    if measured(b, j) {
                        out[[b, j]] += dt * v;
                    } else if b < k {
                        // Folded through w_-(0) = B w_+(0).
                        for p in 0..m {
                            out[[k + p, 0]] += d.b[(b, p)] * dt * v;
                        }
                    } else {
                        // Node x = 1 of the plus family is the control.
                        trace[b - k] += dx * v;
                    }
                }
            }
        }
    }
}

/// Backward sweep of the adjoint system from `v(T) = vt`.
pub fn solve_dual(
    system: &HyperbolicSystem,
    vt: &StateField,
    horizon: f64,
    grid: &Grid,
) -> Result<DualSolution> {
    solve_dual_with(system, vt, horizon, grid, BoundaryQuadrature::default())
}

pub fn solve_dual_with(
    system: &HyperbolicSystem,
    vt: &StateField,
    horizon: f64,
    grid: &Grid,
    quadrature: BoundaryQuadrature,
) -> Result<DualSolution> {
    let lattice = grid.lattice_for(system.speeds(), horizon)?;
    vt.check_shape(system.k(), system.m(), grid.nx())?;
    let d = Discretization::new(system, grid, &lattice)?;

    let mut trace = ControlSignal::zeros(d.m, &lattice);
    let mut z = vt.values().clone();
    extrapolate_unmeasured(&d, &mut z);
    for p in 0..d.m {
        trace.values_mut()[[p, d.steps]] = outgoing(&d, &z, p);
    }
    let mut prev = z.clone();
    let mut level = vec![0.0; d.m];
    for n in (0..d.steps).rev() {
        back_step(&d, quadrature, &z, &mut prev, &mut level);
        extrapolate_unmeasured(&d, &mut prev);
        trace.values_mut().column_mut(n).assign(&ndarray::ArrayView1::from(&level));
        std::mem::swap(&mut z, &mut prev);
        if n % 64 == 0 && !z.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                step: n,
                time: d.time(n),
            });
        }
    }
    let initial = StateField::from_values(d.k, z)?;
    Ok(DualSolution { initial, trace })
}
