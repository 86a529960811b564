//! Small dense matrices for boundary-coupling algebra.
//!
//! Boundary matrices are at most a handful of rows, so everything here is
//! plain row-major `Vec<f64>` storage with textbook algorithms.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// The block formed by the last `order` rows and the last `order` columns.
    pub fn trailing_block(&self, order: usize) -> Matrix {
        assert!(order <= self.rows && order <= self.cols);
        let (r0, c0) = (self.rows - order, self.cols - order);
        let mut out = Matrix::zeros(order, order);
        for i in 0..order {
            for j in 0..order {
                out[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        out
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap();
            if a[pivot * n + col] == 0.0 {
                return Ok(0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f != 0.0 {
                    for j in col..n {
                        a[r * n + j] -= f * a[col * n + j];
                    }
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.max_abs();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
                .unwrap();
            if a[(pivot, col)].abs() <= f64::EPSILON * scale * n as f64 || scale == 0.0 {
                return Err(Error::Singular(format!("pivot {col} vanishes")));
            }
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f != 0.0 {
                    for j in 0..n {
                        a[(r, j)] -= f * a[(col, j)];
                        inv[(r, j)] -= f * inv[(col, j)];
                    }
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// One elementary row operation: `row[target] += factor * row[source]`, with
/// `source < target`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowOperation {
    pub target: usize,
    pub source: usize,
    pub factor: f64,
}

impl RowOperation {
    pub fn as_matrix(&self, size: usize) -> Matrix {
        let mut m = Matrix::identity(size);
        m[(self.target, self.source)] = self.factor;
        m
    }
}

/// Result of Gaussian elimination without row exchanges: `lower * a = upper`,
/// where `lower` is the product of the recorded operations (last one leftmost).
#[derive(Clone, Debug)]
pub struct Elimination {
    pub operations: Vec<RowOperation>,
    pub lower: Matrix,
    pub upper: Matrix,
}

/// Reduce a square matrix to upper-triangular form using only
/// "add a multiple of an earlier row to a later row" operations.
///
/// Fails when a pivot vanishes, which happens exactly when a leading
/// principal minor is singular.
pub fn eliminate_without_pivoting(a: &Matrix, det_tol: f64) -> Result<Elimination> {
    if a.rows() != a.cols() {
        return Err(Error::Dimension("elimination needs a square matrix".into()));
    }
    let n = a.rows();
    let scale = a.max_abs();
    let mut upper = a.clone();
    let mut lower = Matrix::identity(n);
    let mut operations = Vec::new();
    for col in 0..n {
        let pivot = upper[(col, col)];
        if pivot.abs() <= det_tol * scale || scale == 0.0 {
            return Err(Error::Singular(format!(
                "zero pivot in column {} without row exchange",
                col + 1
            )));
        }
        for row in col + 1..n {
            let factor = -upper[(row, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                upper[(row, j)] += factor * upper[(col, j)];
                lower[(row, j)] += factor * lower[(col, j)];
            }
            upper[(row, col)] = 0.0;
            operations.push(RowOperation {
                target: row,
                source: col,
                factor,
            });
        }
    }
    Ok(Elimination {
        operations,
        lower,
        upper,
    })
}
