use std::collections::VecDeque;

use ndarray::Array2;

use super::discretization::{Discretization, Source};
use super::grid::Grid;
use super::state::{ControlSignal, StateField};
use crate::error::{Error, Result};
use crate::model::HyperbolicSystem;

/// Which time levels of a primal solve to keep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TrajectoryMode {
    #[default]
    Off,
    Full,
    /// Keep only the most recent levels.
    Ring(usize),
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: VecDeque<f64>,
    pub states: VecDeque<Array2<f64>>,
    capacity: Option<usize>,
}

impl Trajectory {
    fn new(mode: TrajectoryMode) -> Option<Self> {
        match mode {
            TrajectoryMode::Off => None,
            TrajectoryMode::Full => Some(Self::default()),
            TrajectoryMode::Ring(c) => Some(Self {
                capacity: Some(c.max(1)),
                ..Self::default()
            }),
        }
    }

    fn push(&mut self, t: f64, w: &Array2<f64>) {
        if let Some(c) = self.capacity {
            while self.times.len() >= c {
                self.times.pop_front();
                self.states.pop_front();
            }
        }
        self.times.push_back(t);
        self.states.push_back(w.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PrimalSolution {
    pub terminal: StateField,
    pub trajectory: Option<Trajectory>,
}

/// Fill the inflow nodes: plus family from the control, minus family from
/// the reflection `w_-(0) = B w_+(0)`.
fn fill_boundary(d: &Discretization, w: &mut Array2<f64>, control: &ControlSignal, n: usize) {
    let (k, m, nx) = (d.k, d.m, d.nx);
    for p in 0..m {
        w[[k + p, nx]] = control.values()[[p, n]];
    }
    for i in 0..k {
        let row = d.b.row(i);
        w[[i, 0]] = (0..m).map(|p| row[p] * w[[k + p, 0]]).sum();
    }
}

fn step(d: &Discretization, w: &Array2<f64>, out: &mut Array2<f64>, src: &mut Array2<f64>) {
    let (k, n, nx, dt) = (d.k, d.n(), d.nx, d.dt);
    let has_source = match &d.source {
        Source::None => false,
        Source::Local(c) => {
            for j in 0..=nx {
                let cj = &c[j];
                for a in 0..n {
                    src[[a, j]] = (0..n).map(|b| cj[a * n + b] * w[[b, j]]).sum();
                }
            }
            true
        }
        Source::Boundary(s) => {
            let m = d.m;
            for j in 0..=nx {
                let sj = &s[j];
                for a in 0..n {
                    src[[a, j]] = (0..m).map(|p| sj[a * m + p] * w[[k + p, 0]]).sum();
                }
            }
            true
        }
    };
    for i in 0..n {
        let c = &d.courant[i];
        let wi = w.row(i);
        let wi = wi.as_slice().expect("contiguous");
        let mut oi = out.row_mut(i);
        let oi = oi.as_slice_mut().expect("contiguous");
        if i < k {
            for j in 1..=nx {
                oi[j] = (1.0 - c[j]) * wi[j] + c[j] * wi[j - 1];
            }
        } else {
            for j in 0..nx {
                oi[j] = (1.0 - c[j]) * wi[j] + c[j] * wi[j + 1];
            }
        }
        if has_source {
            let range = if i < k { 1..nx + 1 } else { 0..nx };
            for j in range {
                oi[j] += dt * src[[i, j]];
            }
        }
    }
}

/// March the upwind scheme from `w0` over `[0, horizon]` with boundary
/// control `control`, which must live on the lattice of `grid` for this
/// system and horizon.
pub fn solve_primal(
    system: &HyperbolicSystem,
    w0: &StateField,
    control: &ControlSignal,
    horizon: f64,
    grid: &Grid,
    mode: TrajectoryMode,
) -> Result<PrimalSolution> {
    let lattice = grid.lattice_for(system.speeds(), horizon)?;
    w0.check_shape(system.k(), system.m(), grid.nx())?;
    control.check_lattice(system.m(), &lattice)?;
    let d = Discretization::new(system, grid, &lattice)?;

    let mut w = w0.values().clone();
    let mut next = w.clone();
    let mut src = Array2::zeros(w.dim());
    let mut trajectory = Trajectory::new(mode);
    for n in 0..d.steps {
        fill_boundary(&d, &mut w, control, n);
        if let Some(tr) = trajectory.as_mut() {
            tr.push(d.time(n), &w);
        }
        step(&d, &w, &mut next, &mut src);
        std::mem::swap(&mut w, &mut next);
        if (n % 64 == 63 || n + 1 == d.steps) && !w.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                step: n + 1,
                time: d.time(n + 1),
            });
        }
    }
    fill_boundary(&d, &mut w, control, d.steps);
    if let Some(tr) = trajectory.as_mut() {
        tr.push(horizon, &w);
    }
    let mut terminal = StateField::from_values(system.k(), w)?;
    terminal.time = horizon;
    Ok(PrimalSolution {
        terminal,
        trajectory,
    })
}

/// Uncontrolled evolution (`U = 0`).
pub fn free_evolution(
    system: &HyperbolicSystem,
    w0: &StateField,
    horizon: f64,
    grid: &Grid,
) -> Result<StateField> {
    let lattice = grid.lattice_for(system.speeds(), horizon)?;
    let zero = ControlSignal::zeros(system.m(), &lattice);
    Ok(solve_primal(system, w0, &zero, horizon, grid, TrajectoryMode::Off)?.terminal)
}
