use super::operators::Gramian;
use crate::error::{Error, Result};
use crate::model::HyperbolicSystem;
use crate::solver::{BoundaryQuadrature, Grid, StateField};

#[derive(Clone, Debug)]
pub struct CgOutcome {
    pub phi: StateField,
    pub iterations: usize,
    /// Relative residual `‖(Λ + eps) φ − rhs‖ / ‖rhs‖`.
    pub residual: f64,
    pub converged: bool,
}

/// Matrix-free conjugate gradient on `(Λ + eps) φ = rhs`, with `eps` absolute.
pub fn solve_gramian(
    system: &HyperbolicSystem,
    rhs: &StateField,
    horizon: f64,
    grid: &Grid,
    eps: f64,
    cg_tol: f64,
    cg_maxit: usize,
) -> Result<CgOutcome> {
    let op = Gramian::new(system, horizon, grid, eps, BoundaryQuadrature::Scheme)?;
    conjugate_gradient(&op, rhs, cg_tol, cg_maxit)
}

pub(crate) fn conjugate_gradient(
    op: &Gramian<'_>,
    rhs: &StateField,
    tol: f64,
    maxit: usize,
) -> Result<CgOutcome> {
    if !rhs.is_finite() {
        return Err(Error::Precondition("right-hand side is not finite".into()));
    }
    let mut b = rhs.clone();
    b.clear_unmeasured();
    let bnorm = b.norm();
    let mut phi = op.zeros();
    if bnorm == 0.0 {
        return Ok(CgOutcome {
            phi,
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let mut r = b;
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    let mut residual = 1.0;
    for it in 1..=maxit {
        let ap = op.apply(&p)?;
        let pap = p.dot(&ap);
        if !(pap.is_finite()) {
            return Err(Error::Divergence { iteration: it });
        }
        if pap <= 0.0 {
            // Breakdown on a semidefinite operator; the iterate is as good as it gets.
            return Ok(CgOutcome {
                phi,
                iterations: it - 1,
                residual,
                converged: residual <= tol,
            });
        }
        let alpha = rr / pap;
        phi.add_scaled(alpha, &p);
        r.add_scaled(-alpha, &ap);
        let rr_new = r.dot(&r);
        if !rr_new.is_finite() || !phi.is_finite() {
            return Err(Error::Divergence { iteration: it });
        }
        residual = rr_new.sqrt() / bnorm;
        if residual <= tol {
            return Ok(CgOutcome {
                phi,
                iterations: it,
                residual,
                converged: true,
            });
        }
        let beta = rr_new / rr;
        rr = rr_new;
        let mut next = r.clone();
        next.add_scaled(beta, &p);
        p = next;
    }
    Ok(CgOutcome {
        phi,
        iterations: maxit,
        residual,
        converged: false,
    })
}
