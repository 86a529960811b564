//! Node-level coefficients shared by the primal and dual sweeps.

use super::grid::{Grid, TimeLattice};
use crate::error::{Error, Result};
use crate::model::{Coupling, HyperbolicSystem, Matrix};

const UNIT_SNAP: f64 = 1e-12;

/// Source term sampled at the nodes.
pub(crate) enum Source {
    None,
    /// `C(x_j)`, `n x n` row-major per node.
    Local(Vec<Vec<f64>>),
    /// `S(x_j)` restricted to its plus columns, `n x m` row-major per node.
    Boundary(Vec<Vec<f64>>),
}

pub(crate) struct Discretization {
    pub k: usize,
    pub m: usize,
    pub nx: usize,
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub horizon: f64,
    /// `courant[i][j] = λ_i(x_j) dt / dx`.
    pub courant: Vec<Vec<f64>>,
    pub b: Matrix,
    pub source: Source,
}

impl Discretization {
    pub fn new(system: &HyperbolicSystem, grid: &Grid, lattice: &TimeLattice) -> Result<Self> {
        let (k, m, n) = (system.k(), system.m(), system.n());
        let nx = grid.nx();
        let ratio = lattice.horizon * nx as f64 / lattice.steps as f64;
        let mut courant = Vec::with_capacity(n);
        for i in 0..n {
            let profile = system.speeds().profile(i)?;
            let mut row = Vec::with_capacity(nx + 1);
            for j in 0..=nx {
                let mut c = profile.eval(grid.node(j)) * ratio;
                if (c - 1.0).abs() <= UNIT_SNAP {
                    c = 1.0;
                }
                if c > 1.0 {
                    return Err(Error::Cfl { courant: c });
                }
                row.push(c);
            }
            courant.push(row);
        }
        let source = match system.coupling() {
            c if c.is_zero() => Source::None,
            Coupling::WForm(mat) => Source::Local((0..=nx).map(|j| mat.eval(grid.node(j))).collect()),
            Coupling::UForm(mat) => Source::Boundary(
                (0..=nx)
                    .map(|j| {
                        let full = mat.eval(grid.node(j));
                        let mut out = Vec::with_capacity(n * m);
                        for a in 0..n {
                            out.extend_from_slice(&full[a * n + k..a * n + n]);
                        }
                        out
                    })
                    .collect(),
            ),
        };
        Ok(Self {
            k,
            m,
            nx,
            dx: grid.dx(),
            dt: lattice.dt,
            steps: lattice.steps,
            horizon: lattice.horizon,
            courant,
            b: system.boundary().matrix().clone(),
            source,
        })
    }

    pub fn n(&self) -> usize {
        self.k + self.m
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.horizon
        } else {
            n as f64 * self.dt
        }
    }
}
