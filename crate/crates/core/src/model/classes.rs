//! Membership tests for the boundary-matrix classes defined through
//! trailing principal minors (last `i` rows and last `i` columns).

use super::matrix::Matrix;
use super::system::Tolerances;
use crate::error::{Error, Result};

/// Verdict of a trailing-minor class test.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassReport {
    pub member: bool,
    /// Orders `1..=max_order` that had to be checked.
    pub max_order: usize,
    /// First order whose trailing block is numerically singular.
    pub failing_order: Option<usize>,
}

/// `|det|` above `det_tol · (max entry)^order` counts as invertible.
pub fn trailing_minor_invertible(b: &Matrix, order: usize, det_tol: f64) -> bool {
    let block = b.trailing_block(order);
    let scale = block.max_abs();
    if scale == 0.0 {
        return false;
    }
    let det = block.determinant().expect("square block");
    det.abs() > det_tol * scale.powi(order as i32)
}

fn check_orders(b: &Matrix, max_order: usize, det_tol: f64) -> ClassReport {
    let failing_order = (1..=max_order).find(|&i| !trailing_minor_invertible(b, i, det_tol));
    ClassReport {
        member: failing_order.is_none(),
        max_order,
        failing_order,
    }
}

/// Class used for null controllability: trailing minors of order
/// `1..=min(k, m-1)` invertible.
pub fn class_b_report(b: &Matrix, det_tol: f64) -> ClassReport {
    let (k, m) = (b.rows(), b.cols());
    check_orders(b, k.min(m.saturating_sub(1)), det_tol)
}

/// Class used for exact controllability: trailing minors of order `1..=k`
/// invertible. Requires `m >= k`.
pub fn class_be_report(b: &Matrix, det_tol: f64) -> Result<ClassReport> {
    let (k, m) = (b.rows(), b.cols());
    if m < k {
        return Err(Error::Dimension(format!(
            "exact-controllability class needs m >= k (k = {k}, m = {m})"
        )));
    }
    Ok(check_orders(b, k, det_tol))
}

pub fn in_class_b(b: &Matrix, k: usize, m: usize) -> Result<bool> {
    check_shape(b, k, m)?;
    Ok(class_b_report(b, Tolerances::default().det_tol).member)
}

pub fn in_class_be(b: &Matrix, k: usize, m: usize) -> Result<bool> {
    check_shape(b, k, m)?;
    Ok(class_be_report(b, Tolerances::default().det_tol)?.member)
}

fn check_shape(b: &Matrix, k: usize, m: usize) -> Result<()> {
    if b.rows() != k || b.cols() != m {
        return Err(Error::Dimension(format!(
            "B is {}x{} but k = {k}, m = {m}",
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}
