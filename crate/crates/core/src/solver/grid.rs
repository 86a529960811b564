use crate::error::{Error, Result};
use crate::model::SpeedProfile;

/// Uniform spatial grid with `nx` cells on [0, 1] and a Courant number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    nx: usize,
    cfl: f64,
}

/// Uniform time lattice `t_n = n · dt`, `n = 0..=steps`, with `steps · dt = horizon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeLattice {
    pub steps: usize,
    pub dt: f64,
    pub horizon: f64,
}

impl TimeLattice {
    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.horizon
        } else {
            n as f64 * self.dt
        }
    }
}

pub const MIN_CELLS: usize = 8;

impl Grid {
    pub fn new(nx: usize, cfl: f64) -> Result<Self> {
        if nx < MIN_CELLS {
            return Err(Error::Precondition(format!(
                "grid needs at least {MIN_CELLS} cells, got {nx}"
            )));
        }
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::Precondition(format!(
                "Courant number must lie in (0, 1], got {cfl}"
            )));
        }
        Ok(Self { nx, cfl })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.nx as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.nx as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.nx).map(|j| self.node(j))
    }

    /// Time lattice for `horizon`: the CFL step is shrunk uniformly so the
    /// last node lands exactly on `horizon`.
    pub fn time_lattice(&self, horizon: f64, max_speed: f64) -> Result<TimeLattice> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Precondition(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        if !(max_speed > 0.0) {
            return Err(Error::Precondition("maximal speed must be positive".into()));
        }
        let dt_cfl = self.cfl * self.dx() / max_speed;
        let steps = ((horizon / dt_cfl) - 1e-9).ceil().max(1.0) as usize;
        Ok(TimeLattice {
            steps,
            dt: horizon / steps as f64,
            horizon,
        })
    }

    pub fn lattice_for(&self, speeds: &SpeedProfile, horizon: f64) -> Result<TimeLattice> {
        self.time_lattice(horizon, speeds.max_speed())
    }
}

/// Largest stable step `cfl · dx / max λ` for the upwind scheme.
pub fn cfl_timestep(grid: &Grid, speeds: &SpeedProfile) -> f64 {
    grid.cfl() * grid.dx() / speeds.max_speed()
}
