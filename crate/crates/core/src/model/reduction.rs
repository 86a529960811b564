//! Constructive reductions between exact and null controllability.
//!
//! * Time reversal (`m = k`): `w̃(t, x) = w(T - t, x)` swaps the families,
//!   reverses the order inside each, and turns the boundary matrix into
//!   `B̃⁻¹` with `B̃_ij = B_{k+1-i, k+1-j}` (1-based).
//! * Augmentation (`m > k`): prepend `m - k` fast minus components so the
//!   augmented system has as many minus as plus components.

use super::classes::class_b_report;
use super::matrix::{eliminate_without_pivoting, Elimination, Matrix};
use super::profile::{Profile, ProfileMatrix};
use super::system::{BoundaryMatrix, Coupling, HyperbolicSystem, SpeedProfile, Tolerances};
use crate::error::{Error, Result};

/// Output of [`time_reverse_reduction`].
#[derive(Clone, Debug)]
pub struct TimeReversal {
    pub system: HyperbolicSystem,
    /// `B̃`, the index-reversed boundary matrix.
    pub reversed_boundary: Matrix,
    /// `B̃⁻¹`, the boundary matrix of the reversed system.
    pub inverse: Matrix,
    /// Row operations with `lower · B̃ = upper`; `None` when a leading minor
    /// of `B̃` vanishes and elimination without row exchanges is impossible.
    pub elimination: Option<Elimination>,
    /// Whether `B̃⁻¹` lies in the null-controllability class.
    pub inverse_in_class_b: bool,
}

/// `B̃_ij = B_{k-1-i, k-1-j}` (0-based), i.e. both index orders reversed.
pub fn reverse_indices(b: &Matrix) -> Matrix {
    let (r, c) = (b.rows(), b.cols());
    let mut out = Matrix::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            out[(i, j)] = b[(r - 1 - i, c - 1 - j)];
        }
    }
    out
}

pub fn time_reverse_reduction(system: &HyperbolicSystem) -> Result<TimeReversal> {
    let (k, m) = (system.k(), system.m());
    if k != m {
        return Err(Error::Dimension(format!(
            "time reversal needs m = k (k = {k}, m = {m})"
        )));
    }
    let tol = Tolerances::default();
    let n = k + m;
    let b_tilde = reverse_indices(system.boundary().matrix());
    let det = b_tilde.determinant()?;
    if det.abs() <= tol.det_tol * b_tilde.max_abs().powi(k as i32) || b_tilde.max_abs() == 0.0 {
        return Err(Error::Singular("reversed boundary matrix is singular".into()));
    }
    let inverse = b_tilde.inverse()?;

    // new component a is old component perm[a]
    let perm: Vec<usize> = (0..k)
        .map(|i| 2 * k - 1 - i)
        .chain((0..k).map(|i| k - 1 - i))
        .collect();
    let old = system.speeds().profiles();
    let speeds = SpeedProfile::new(k, m, perm.iter().map(|&p| old[p].clone()).collect())?;

    let coupling = match system.coupling() {
        Coupling::WForm(c) => {
            let mut out = ProfileMatrix::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    out.set(a, b, c.get(perm[a], perm[b]).map(|v| -v));
                }
            }
            Coupling::WForm(out)
        }
        Coupling::UForm(s) if s.is_zero() => Coupling::zero_u(n),
        Coupling::UForm(_) => {
            return Err(Error::Precondition(
                "time reversal of a u-form system is only defined for S = 0".into(),
            ))
        }
    };

    let elimination = eliminate_without_pivoting(&b_tilde, tol.det_tol).ok();
    let reversed = HyperbolicSystem::new(speeds, coupling, BoundaryMatrix::new(inverse.clone()))?;
    Ok(TimeReversal {
        system: reversed,
        reversed_boundary: b_tilde,
        inverse_in_class_b: class_b_report(&inverse, tol.det_tol).member,
        inverse,
        elimination,
    })
}

/// Recombine `U⁻¹ · (T_N ⋯ T_1)` from an elimination of `B̃`.
pub fn inverse_from_elimination(e: &Elimination) -> Result<Matrix> {
    e.upper.inverse()?.matmul(&e.lower)
}

/// Embed an `m > k` system into one with `m` minus and `m` plus components.
///
/// The added minus components travel at constant speeds
/// `(1 + m - k - j) / eps` for `j = 1..=m-k`, carry no coupling, and satisfy
/// `ŵ_j(t, 0) = ŵ_{m+j}(t, 0)`: the augmented boundary matrix is
/// `[[I_{m-k}, 0_{m-k,k}], [B]]`.
pub fn augment_system(system: &HyperbolicSystem, eps: f64) -> Result<HyperbolicSystem> {
    let (k, m) = (system.k(), system.m());
    if m <= k {
        return Err(Error::Dimension(format!(
            "augmentation needs m > k (k = {k}, m = {m})"
        )));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    let extra = m - k;
    let tol = Tolerances::default();
    let fastest = system.speeds().profiles()[0].max();
    if 1.0 / eps <= fastest + tol.speed_gap {
        return Err(Error::Ordering(format!(
            "added speed 1/eps = {} does not exceed the fastest minus speed {fastest}",
            1.0 / eps
        )));
    }

    let old = system.speeds().profiles();
    let speeds: Vec<Profile> = (1..=extra)
        .map(|j| Profile::Constant((1 + extra - j) as f64 / eps))
        .chain(old.iter().cloned())
        .collect();
    let n_hat = 2 * m;
    let speeds = SpeedProfile::new(m, m, speeds)?;

    let c = system.coupling().matrix();
    let mut padded = ProfileMatrix::zeros(n_hat, n_hat);
    for a in 0..system.n() {
        for b in 0..system.n() {
            padded.set(extra + a, extra + b, c.get(a, b).clone());
        }
    }
    let coupling = match system.coupling() {
        Coupling::WForm(_) => Coupling::WForm(padded),
        Coupling::UForm(_) => Coupling::UForm(padded),
    };

    let b = system.boundary().matrix();
    let mut b_hat = Matrix::zeros(m, m);
    for j in 0..extra {
        b_hat[(j, j)] = 1.0;
    }
    for i in 0..k {
        for j in 0..m {
            b_hat[(extra + i, j)] = b[(i, j)];
        }
    }
    HyperbolicSystem::new(speeds, coupling, BoundaryMatrix::new(b_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::classes::{in_class_b, in_class_be};
    use crate::model::times::t_opt;

    #[test]
    fn scalar_reversal_inverts() {
        let sys = HyperbolicSystem::constant(1, 1, &[1.0, 2.0], false, &[vec![4.0]]).unwrap();
        let r = time_reverse_reduction(&sys).unwrap();
        assert_eq!(r.system.boundary().matrix()[(0, 0)], 0.25);
        // families swap: new minus speed is the old plus speed
        assert_eq!(r.system.speeds().profiles()[0], Profile::Constant(2.0));
        assert_eq!(r.system.speeds().profiles()[1], Profile::Constant(1.0));
    }

    #[test]
    fn two_by_two_reversal_against_direct_inverse() {
        let sys = HyperbolicSystem::constant(
            2,
            2,
            &[3.0, 2.0, 1.0, 1.5],
            false,
            &[vec![1.0, 2.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let r = time_reverse_reduction(&sys).unwrap();
        // B̃ = [[B22, B21], [B12, B11]]
        assert_eq!(r.reversed_boundary.row(0), &[1.0, 0.0]);
        assert_eq!(r.reversed_boundary.row(1), &[2.0, 1.0]);
        let prod = r.reversed_boundary.matmul(&r.inverse).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - want).abs() < 1e-12);
            }
        }
        let e = r.elimination.as_ref().unwrap();
        let recombined = inverse_from_elimination(e).unwrap();
        for (a, b) in recombined.as_slice().iter().zip(r.inverse.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(r.inverse_in_class_b);
        // reversed speeds: minus = (λ4, λ3), plus = (λ2, λ1)
        let l: Vec<f64> = r.system.speeds().profiles().iter().map(|p| p.eval(0.0)).collect();
        assert_eq!(l, vec![1.5, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn reversal_negates_and_permutes_coupling() {
        let mut c = ProfileMatrix::zeros(2, 2);
        c.set(0, 1, Profile::Constant(3.0));
        let sys = HyperbolicSystem::new(
            SpeedProfile::constant(1, 1, &[1.0, 1.0]).unwrap(),
            Coupling::WForm(c),
            BoundaryMatrix::from_rows(&[vec![1.0]]).unwrap(),
        )
        .unwrap();
        let r = time_reverse_reduction(&sys).unwrap();
        assert_eq!(r.system.coupling().matrix().get(1, 0), &Profile::Constant(-3.0));
    }

    #[test]
    fn reversal_rejects_rectangular_and_singular() {
        let rect = HyperbolicSystem::constant(1, 2, &[1.0, 1.0, 2.0], false, &[vec![1.0, 1.0]]).unwrap();
        assert!(matches!(time_reverse_reduction(&rect), Err(Error::Dimension(_))));
        let sing = HyperbolicSystem::constant(1, 1, &[1.0, 1.0], false, &[vec![0.0]]).unwrap();
        assert!(matches!(time_reverse_reduction(&sing), Err(Error::Singular(_))));
    }

    #[test]
    fn augmentation_shapes_and_speeds() {
        let sys = HyperbolicSystem::constant(1, 2, &[1.0, 1.0, 2.0], true, &[vec![0.5, 1.0]]).unwrap();
        let aug = augment_system(&sys, 0.01).unwrap();
        assert_eq!((aug.n(), aug.k(), aug.m()), (4, 2, 2));
        assert!((aug.speeds().profiles()[0].eval(0.0) - 100.0).abs() < 1e-9);
        let b = aug.boundary().matrix();
        assert_eq!(b.row(0), &[1.0, 0.0]);
        assert_eq!(b.row(1), &[0.5, 1.0]);
        assert!(in_class_be(b, 2, 2).unwrap());
        assert!(in_class_b(b, 2, 2).unwrap());
    }

    #[test]
    fn augmentation_gap_within_two_eps() {
        let sys = HyperbolicSystem::constant(1, 2, &[1.0, 1.0, 2.0], true, &[vec![0.5, 1.0]]).unwrap();
        let base = t_opt(sys.speeds()).unwrap().t_opt;
        for eps in [0.1, 0.01, 0.001] {
            let aug = augment_system(&sys, eps).unwrap();
            let gap = (t_opt(aug.speeds()).unwrap().t_opt - base).abs();
            assert!(gap <= 2.0 * eps, "eps {eps}: gap {gap}");
        }
    }

    #[test]
    fn augmentation_rejects_slow_added_speed() {
        let sys = HyperbolicSystem::constant(1, 2, &[1.0, 1.0, 2.0], true, &[vec![0.5, 1.0]]).unwrap();
        assert!(matches!(augment_system(&sys, 2.0), Err(Error::Ordering(_))));
        let square = HyperbolicSystem::constant(1, 1, &[1.0, 1.0], true, &[vec![1.0]]).unwrap();
        assert!(matches!(augment_system(&square, 0.1), Err(Error::Dimension(_))));
    }
}
