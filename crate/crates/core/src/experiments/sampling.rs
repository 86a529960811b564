//! Seeded random smooth data for studies and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::solver::{ControlSignal, Grid, StateField, TimeLattice};

pub type StudyRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StudyRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random trigonometric polynomial on [0, 1] with `modes` terms, amplitudes
/// decaying like `1/q`.
fn coefficients(rng: &mut StudyRng, modes: usize) -> Vec<(f64, f64)> {
    (1..=modes)
        .map(|q| {
            let q = q as f64;
            (rng.random_range(-1.0..1.0) / q, rng.random_range(-1.0..1.0) / q)
        })
        .collect()
}

fn evaluate(coef: &[(f64, f64)], s: f64) -> f64 {
    coef.iter()
        .enumerate()
        .map(|(q, (a, b))| {
            let w = std::f64::consts::PI * (q + 1) as f64 * s;
            a * w.sin() + b * w.cos()
        })
        .sum()
}

pub fn smooth_state(rng: &mut StudyRng, k: usize, m: usize, grid: &Grid, modes: usize) -> StateField {
    let coef: Vec<_> = (0..k + m).map(|_| coefficients(rng, modes)).collect();
    let mut s = StateField::from_fn(k, m, grid, |i, x| evaluate(&coef[i], x));
    s.clear_unmeasured();
    s
}

pub fn smooth_control(rng: &mut StudyRng, m: usize, lattice: &TimeLattice, modes: usize) -> ControlSignal {
    let coef: Vec<_> = (0..m).map(|_| coefficients(rng, modes)).collect();
    ControlSignal::from_fn(m, lattice, |p, t| evaluate(&coef[p], t / lattice.horizon))
}

/// Compactly supported `cos²` bump of half-width `r` centred at `c`.
pub fn compact_bump(x: f64, c: f64, r: f64) -> f64 {
    let s = (x - c) / r;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (std::f64::consts::FRAC_PI_2 * s).cos().powi(2)
    }
}

/// `0.5 (1 − cos 2πx)`.
pub fn raised_cosine(x: f64) -> f64 {
    0.5 * (1.0 - (2.0 * std::f64::consts::PI * x).cos())
}

fn positive_wiggle(rng: &mut StudyRng, nq: usize, floor: f64) -> Vec<f64> {
    let a = rng.random_range(0.2..1.5);
    let b = rng.random_range(-0.15..0.15);
    let f = rng.random_range(0.5..3.0);
    let ph = rng.random_range(0.0..std::f64::consts::TAU);
    (0..nq)
        .map(|q| {
            let x = q as f64 / (nq - 1) as f64;
            floor + a + b * (f * std::f64::consts::PI * x + ph).sin()
        })
        .collect()
}

/// Random Lipschitz speeds respecting the ordering of both families.
pub fn random_speed_profile(rng: &mut StudyRng, k: usize, m: usize, nq: usize) -> crate::model::SpeedProfile {
    use crate::model::{Profile, SpeedProfile};
    let mut minus: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut acc = positive_wiggle(rng, nq, 0.1);
    minus.push(acc.clone());
    for _ in 1..k {
        let inc = positive_wiggle(rng, nq, 0.05);
        acc = acc.iter().zip(&inc).map(|(a, d)| a + d).collect();
        minus.push(acc.clone());
    }
    minus.reverse();
    let mut plus = Vec::with_capacity(m);
    let mut acc = positive_wiggle(rng, nq, 0.1);
    plus.push(acc.clone());
    for _ in 1..m {
        let inc = positive_wiggle(rng, nq, 0.05);
        acc = acc.iter().zip(&inc).map(|(a, d)| a + d).collect();
        plus.push(acc.clone());
    }
    SpeedProfile::new(
        k,
        m,
        minus.into_iter().chain(plus).map(Profile::Samples).collect(),
    )
    .expect("generated speeds are ordered and positive")
}
