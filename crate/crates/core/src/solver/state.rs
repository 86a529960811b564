//! Discrete states and boundary signals with their inner products.
//!
//! Each family has one inflow node whose value is dictated by a boundary
//! condition (node 0 for the minus family, node `nx` for the plus family).
//! Inner products skip that node and weight the remaining `nx` nodes by
//! `dx`, which makes the discrete control map and the dual sweep exact
//! transposes of each other. Signals in time are weighted by `dt` on the
//! nodes `0..steps`.

use ndarray::Array2;

use super::grid::{Grid, TimeLattice};
use crate::error::{Error, Result};

/// `n x (nx + 1)` node values of a state at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct StateField {
    k: usize,
    values: Array2<f64>,
    pub time: f64,
}

impl StateField {
    pub fn zeros(k: usize, m: usize, nx: usize) -> Self {
        Self {
            k,
            values: Array2::zeros((k + m, nx + 1)),
            time: 0.0,
        }
    }

    /// Sample `f(component, x)` at every node.
    pub fn from_fn(k: usize, m: usize, grid: &Grid, f: impl Fn(usize, f64) -> f64) -> Self {
        let nx = grid.nx();
        let values = Array2::from_shape_fn((k + m, nx + 1), |(i, j)| f(i, grid.node(j)));
        Self {
            k,
            values,
            time: 0.0,
        }
    }

    pub fn from_values(k: usize, values: Array2<f64>) -> Result<Self> {
        if values.nrows() <= k || values.ncols() < 2 {
            return Err(Error::Dimension(format!(
                "state of shape {:?} cannot hold k = {k} minus components",
                values.dim()
            )));
        }
        Ok(Self {
            k,
            values,
            time: 0.0,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.values.nrows() - self.k
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn nx(&self) -> usize {
        self.values.ncols() - 1
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn component(&self, i: usize) -> &[f64] {
        self.values
            .row(i)
            .to_slice()
            .expect("state rows are contiguous")
    }

    /// Whether node `j` of component `i` carries inner-product weight.
    pub fn is_measured(&self, i: usize, j: usize) -> bool {
        if i < self.k {
            j != 0
        } else {
            j != self.nx()
        }
    }

    fn measured_range(&self, i: usize) -> std::ops::Range<usize> {
        if i < self.k {
            1..self.nx() + 1
        } else {
            0..self.nx()
        }
    }

    pub fn same_shape(&self, other: &StateField) -> bool {
        self.k == other.k && self.values.dim() == other.values.dim()
    }

    pub fn check_shape(&self, k: usize, m: usize, nx: usize) -> Result<()> {
        if self.k != k || self.m() != m || self.nx() != nx {
            return Err(Error::Dimension(format!(
                "state has (k, m, nx) = ({}, {}, {}) but ({k}, {m}, {nx}) is required",
                self.k,
                self.m(),
                self.nx()
            )));
        }
        Ok(())
    }

    pub fn dot(&self, other: &StateField) -> f64 {
        debug_assert!(self.same_shape(other));
        let dx = 1.0 / self.nx() as f64;
        (0..self.n())
            .map(|i| {
                let r = self.measured_range(i);
                let a = &self.component(i)[r.clone()];
                let b = &other.component(i)[r];
                a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
            })
            .sum::<f64>()
            * dx
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Zero the inflow nodes, which carry no weight.
    pub fn clear_unmeasured(&mut self) {
        let nx = self.nx();
        for i in 0..self.n() {
            let j = if i < self.k { 0 } else { nx };
            self.values[[i, j]] = 0.0;
        }
    }

    pub fn add_scaled(&mut self, a: f64, other: &StateField) {
        debug_assert!(self.same_shape(other));
        self.values.scaled_add(a, &other.values);
    }

    pub fn scale(&mut self, a: f64) {
        self.values.mapv_inplace(|v| v * a);
    }

    pub fn scaled(&self, a: f64) -> StateField {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    pub fn sub(&self, other: &StateField) -> StateField {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// `m x (steps + 1)` samples of a boundary signal on a time lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSignal {
    values: Array2<f64>,
    pub horizon: f64,
}

/// The weighted outgoing plus-family trace at `x = 1`; same layout as a control.
pub type BoundaryTrace = ControlSignal;

impl ControlSignal {
    pub fn zeros(m: usize, lattice: &TimeLattice) -> Self {
        Self {
            values: Array2::zeros((m, lattice.steps + 1)),
            horizon: lattice.horizon,
        }
    }

    pub fn from_fn(m: usize, lattice: &TimeLattice, f: impl Fn(usize, f64) -> f64) -> Self {
        Self {
            values: Array2::from_shape_fn((m, lattice.steps + 1), |(p, n)| f(p, lattice.time(n))),
            horizon: lattice.horizon,
        }
    }

    pub fn from_values(values: Array2<f64>, horizon: f64) -> Result<Self> {
        if values.ncols() < 2 {
            return Err(Error::Dimension("signal needs at least two time nodes".into()));
        }
        Ok(Self { values, horizon })
    }

    pub fn m(&self) -> usize {
        self.values.nrows()
    }

    pub fn steps(&self) -> usize {
        self.values.ncols() - 1
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps() as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps() {
            self.horizon
        } else {
            n as f64 * self.dt()
        }
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn check_lattice(&self, m: usize, lattice: &TimeLattice) -> Result<()> {
        if self.m() != m || self.steps() != lattice.steps {
            return Err(Error::Dimension(format!(
                "signal has {} components on {} steps but {m} components on {} steps are required",
                self.m(),
                self.steps(),
                lattice.steps
            )));
        }
        if (self.horizon - lattice.horizon).abs() > 1e-12 * lattice.horizon.max(1.0) {
            return Err(Error::Dimension(format!(
                "signal horizon {} differs from {}",
                self.horizon, lattice.horizon
            )));
        }
        Ok(())
    }

    pub fn dot(&self, other: &ControlSignal) -> f64 {
        let steps = self.steps();
        let mut acc = 0.0;
        for p in 0..self.m() {
            for n in 0..steps {
                acc += self.values[[p, n]] * other.values[[p, n]];
            }
        }
        acc * self.dt()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn add_scaled(&mut self, a: f64, other: &ControlSignal) {
        self.values.scaled_add(a, &other.values);
    }

    pub fn scaled(&self, a: f64) -> ControlSignal {
        ControlSignal {
            values: self.values.mapv(|v| v * a),
            horizon: self.horizon,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_inner_product_skips_inflow_nodes() {
        let g = Grid::new(8, 1.0).unwrap();
        let s = StateField::from_fn(1, 1, &g, |_, _| 1.0);
        assert!((s.norm() - 2f64.sqrt()).abs() < 1e-14);
        let mut t = s.clone();
        t.values_mut()[[0, 0]] = 1e6;
        t.values_mut()[[1, 8]] = 1e6;
        assert_eq!(s.dot(&t), s.dot(&s));
        t.clear_unmeasured();
        assert_eq!(t.values()[[0, 0]], 0.0);
        assert_eq!(t.values()[[1, 8]], 0.0);
        assert_eq!(t.dot(&s), s.dot(&s));
    }

    #[test]
    fn signal_inner_product_is_left_riemann() {
        let lat = TimeLattice {
            steps: 4,
            dt: 0.25,
            horizon: 1.0,
        };
        let u = ControlSignal::from_fn(1, &lat, |_, t| t);
        // 0.25 * (0 + 0.25 + 0.5 + 0.75)
        assert!((u.dot(&ControlSignal::from_fn(1, &lat, |_, _| 1.0)) - 0.375).abs() < 1e-15);
    }
}
