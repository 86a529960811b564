//! Scalar functions on [0, 1] stored either as a constant or as uniform
//! samples joined by linear interpolation.

#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// Values at `len` uniform nodes `x_j = j / (len - 1)`; needs `len >= 2`.
    Samples(Vec<f64>),
}

impl Profile {
    pub fn zero() -> Self {
        Profile::Constant(0.0)
    }

    /// Sample `f` at `nq + 1` uniform nodes.
    pub fn sampled(nq: usize, f: impl Fn(f64) -> f64) -> Self {
        assert!(nq >= 1, "need at least two sample nodes");
        let h = 1.0 / nq as f64;
        Profile::Samples((0..=nq).map(|j| f(j as f64 * h)).collect())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Samples(s) => {
                let intervals = s.len() - 1;
                let pos = x.clamp(0.0, 1.0) * intervals as f64;
                let j = (pos.floor() as usize).min(intervals - 1);
                let theta = pos - j as f64;
                if theta == 0.0 {
                    s[j]
                } else {
                    (1.0 - theta) * s[j] + theta * s[j + 1]
                }
            }
        }
    }

    /// Number of sample nodes, `None` for a constant.
    pub fn sample_count(&self) -> Option<usize> {
        match self {
            Profile::Constant(_) => None,
            Profile::Samples(s) => Some(s.len()),
        }
    }

    pub fn values(&self) -> &[f64] {
        match self {
            Profile::Constant(c) => std::slice::from_ref(c),
            Profile::Samples(s) => s,
        }
    }

    pub fn min(&self) -> f64 {
        self.values().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values().iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values().iter().all(|&v| v == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }

    /// Largest finite-difference slope between neighbouring samples.
    pub fn lipschitz_estimate(&self) -> f64 {
        match self {
            Profile::Constant(_) => 0.0,
            Profile::Samples(s) => {
                let inv_h = (s.len() - 1) as f64;
                s.windows(2)
                    .map(|w| (w[1] - w[0]).abs() * inv_h)
                    .fold(0.0, f64::max)
            }
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Profile {
        match self {
            Profile::Constant(c) => Profile::Constant(f(*c)),
            Profile::Samples(s) => Profile::Samples(s.iter().map(|&v| f(v)).collect()),
        }
    }
}

/// A matrix whose entries are profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Profile>,
}

impl ProfileMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Profile::zero(); rows * cols],
        }
    }

    pub fn constant(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self {
            rows,
            cols,
            entries: data.iter().map(|&v| Profile::Constant(v)).collect(),
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Profile>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Profile {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Profile) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Profile] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Profile::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(Profile::max_abs).fold(0.0, f64::max)
    }

    /// Row-major values of every entry at `x`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        self.entries.iter().map(|p| p.eval(x)).collect()
    }
}
