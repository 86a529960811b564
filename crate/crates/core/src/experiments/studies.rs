use std::time::Instant;

use rayon::prelude::*;

use super::record::{system_fingerprint, StudyRecord};
use super::sampling::{rng, smooth_control, smooth_state};
use crate::error::{Error, Result};
use crate::hum::{
    apply_ft, apply_ft_star, observability_constant, synthesize_null_control, HumOptions,
    ObservabilityOptions, ObservabilityVariant,
};
use crate::model::{augment_system, t_opt, HyperbolicSystem, SpeedProfile};
use crate::solver::{Grid, StateField};

const MODES: usize = 6;

/// Least-squares slope of `log y` against `log x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Largest relative duality gap `|⟨F U, v⟩ − ⟨U, F* v⟩| / (‖U‖ ‖v‖)` over
/// `trials` seeded random pairs, one row per grid.
pub fn adjoint_consistency_study(
    system: &HyperbolicSystem,
    horizon: f64,
    grids: &[usize],
    cfl: f64,
    trials: usize,
    seed: u64,
) -> Result<StudyRecord> {
    let start = Instant::now();
    let mut rec = StudyRecord::new(
        "adjoint_consistency",
        system_fingerprint(system),
        seed,
        &["nx", "max_relative_gap"],
    );
    rec.param("T", horizon);
    rec.param("cfl", cfl);
    rec.param("trials", trials);
    rec.param("grids", format!("{grids:?}"));
    let (k, m) = (system.k(), system.m());
    let mut gaps = Vec::new();
    for &nx in grids {
        let grid = Grid::new(nx, cfl)?;
        let lattice = grid.lattice_for(system.speeds(), horizon)?;
        let mut r = rng(seed);
        let pairs: Vec<_> = (0..trials)
            .map(|_| {
                (
                    smooth_control(&mut r, m, &lattice, MODES),
                    smooth_state(&mut r, k, m, &grid, MODES),
                )
            })
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let per_pair: Vec<f64> = pairs
            .par_iter()
            .map(|(u, v)| -> Result<f64> {
                let lhs = apply_ft(system, u, horizon, &grid)?.dot(v);
                let rhs = u.dot(&apply_ft_star(system, v, horizon, &grid)?);
                Ok((lhs - rhs).abs() / (u.norm() * v.norm()).max(f64::MIN_POSITIVE))
            })
            .collect::<Result<_>>()?;
        let worst = per_pair.into_iter().fold(0.0, f64::max);
        gaps.push((nx, worst));
        rec.rows.push(vec![nx as f64, worst]);
    }
    if gaps.is_empty() {
        rec.flag("no trials: gap list empty, rate undefined");
    } else if gaps.iter().all(|g| g.1 <= 1e-12) {
        rec.flag("gaps at roundoff level; transposition exact");
        rec.check("gaps_roundoff", true, "all gaps <= 1e-12");
    } else {
        let dx: Vec<f64> = gaps.iter().map(|g| 1.0 / g.0 as f64).collect();
        let y: Vec<f64> = gaps.iter().map(|g| g.1).collect();
        let decreasing = y.windows(2).all(|w| w[1] < w[0]);
        rec.check("gaps_decreasing", decreasing, format!("{y:?}"));
        match log_slope(&dx, &y) {
            Some(rate) => {
                rec.outputs.insert("rate".into(), rate);
                rec.check("rate_at_least_0.8", rate >= 0.8, format!("rate {rate:.3}"));
            }
            None => rec.flag("single grid: rate undefined"),
        }
    }
    rec.wall_seconds = start.elapsed().as_secs_f64();
    Ok(rec)
}

/// Observability estimates over ascending horizons with knee detection.
pub fn observability_scan(
    system: &HyperbolicSystem,
    horizons: &[f64],
    grid: &Grid,
    variant: ObservabilityVariant,
    options: &ObservabilityOptions,
) -> Result<StudyRecord> {
    let start = Instant::now();
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("scan horizons must be strictly ascending".into()));
    }
    let mut rec = StudyRecord::new(
        "observability_scan",
        system_fingerprint(system),
        0,
        &["T", "constant_estimate", "iterations", "residual"],
    );
    rec.param("nx", grid.nx());
    rec.param("cfl", grid.cfl());
    rec.param("variant", variant);
    rec.param("horizons", format!("{horizons:?}"));
    let topt = t_opt(system.speeds())?.t_opt;
    let estimates: Vec<_> = horizons
        .par_iter()
        .map(|&t| observability_constant(system, t, grid, variant, options))
        .collect::<Result<_>>()?;
    for e in &estimates {
        rec.rows.push(vec![
            e.horizon,
            e.constant_estimate,
            e.iterations as f64,
            e.residual,
        ]);
        if e.degenerate {
            rec.flag(format!("T = {}: denominator vanishes, estimate capped", e.horizon));
        }
        if !e.converged {
            rec.flag(format!("T = {}: power iteration cap reached", e.horizon));
        }
    }
    rec.outputs.insert("t_opt".into(), topt);
    if estimates.len() < 2 {
        rec.flag("fewer than two horizons: no knee");
    } else {
        let (idx, ratio) = estimates
            .windows(2)
            .map(|w| w[1].constant_estimate / w[0].constant_estimate.max(f64::MIN_POSITIVE))
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
        rec.outputs.insert("knee_lower_T".into(), horizons[idx]);
        rec.outputs.insert("knee_upper_T".into(), horizons[idx + 1]);
        rec.outputs.insert("knee_ratio".into(), ratio);
        rec.outputs.insert("knee_lower_over_t_opt".into(), horizons[idx] / topt);
        rec.outputs.insert("knee_upper_over_t_opt".into(), horizons[idx + 1] / topt);
        let tol = options.inner_tol.max(1e-3) * 10.0;
        let monotone = estimates
            .windows(2)
            .all(|w| w[1].constant_estimate >= w[0].constant_estimate * (1.0 - tol));
        rec.check("monotone_in_T", monotone, format!("relative tolerance {tol:e}"));
    }
    rec.wall_seconds = start.elapsed().as_secs_f64();
    Ok(rec)
}

/// Compare the optimal time with the Russell time `τ_k + τ_{k+1}`.
pub fn russell_comparison(profiles: &[SpeedProfile]) -> Result<StudyRecord> {
    let start = Instant::now();
    let mut rec = StudyRecord::new(
        "russell_comparison",
        String::new(),
        0,
        &["k", "m", "t_opt", "russell_time", "ratio"],
    );
    let mut hasher_input = String::new();
    let mut worst: f64 = 0.0;
    for p in profiles {
        let r = t_opt(p)?;
        let ratio = r.t_opt / r.russell_time;
        worst = worst.max(ratio);
        hasher_input.push_str(&format!("{:?};", r.tau));
        rec.rows
            .push(vec![p.k() as f64, p.m() as f64, r.t_opt, r.russell_time, ratio]);
    }
    rec.fingerprint = {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(hasher_input.as_bytes()))
    };
    rec.param("profiles", profiles.len());
    rec.outputs.insert("max_ratio".into(), worst);
    rec.check(
        "t_opt_le_russell",
        worst <= 1.0 + 1e-12,
        format!("max ratio {worst}"),
    );
    rec.wall_seconds = start.elapsed().as_secs_f64();
    Ok(rec)
}

/// Terminal residual of null synthesis over a grid × eps table, plus an
/// optional horizon below the optimal time as a negative control.
#[allow(clippy::too_many_arguments)]
pub fn null_control_convergence(
    system: &HyperbolicSystem,
    initial: &(dyn Fn(&Grid) -> StateField + Sync),
    horizon: f64,
    grids: &[usize],
    cfl: f64,
    eps_values: &[f64],
    negative_horizon: Option<f64>,
    options: &HumOptions,
) -> Result<StudyRecord> {
    let start = Instant::now();
    let topt = t_opt(system.speeds())?.t_opt;
    if horizon <= topt {
        return Err(Error::Precondition(format!(
            "horizon {horizon} must exceed the optimal time {topt}"
        )));
    }
    let mut rec = StudyRecord::new(
        "null_control_convergence",
        system_fingerprint(system),
        0,
        &["T", "nx", "eps", "terminal_residual", "cg_iterations"],
    );
    rec.param("T", horizon);
    rec.param("cfl", cfl);
    rec.param("grids", format!("{grids:?}"));
    rec.param("eps", format!("{eps_values:?}"));
    let mut points: Vec<(f64, usize, f64)> = Vec::new();
    for &nx in grids {
        for &eps in eps_values {
            points.push((horizon, nx, eps));
        }
    }
    if let Some(t) = negative_horizon {
        rec.param("negative_T", t);
        for &nx in grids {
            points.push((t, nx, eps_values.last().copied().unwrap_or(options.eps)));
        }
    }
    let results: Vec<(f64, usize)> = points
        .par_iter()
        .map(|&(t, nx, eps)| -> Result<(f64, usize)> {
            let grid = Grid::new(nx, cfl)?;
            let w0 = initial(&grid);
            let opts = HumOptions { eps, ..options.clone() };
            let r = synthesize_null_control(system, &w0, t, &grid, &opts)?;
            Ok((r.terminal_residual_norm, r.cg_iterations))
        })
        .collect::<Result<_>>()?;
    for (&(t, nx, eps), &(res, it)) in points.iter().zip(&results) {
        rec.rows.push(vec![t, nx as f64, eps, res, it as f64]);
    }
    let lookup = |nx: usize, eps: f64| {
        points
            .iter()
            .zip(&results)
            .find(|(p, _)| p.0 == horizon && p.1 == nx && p.2 == eps)
            .map(|(_, r)| r.0)
            .unwrap_or(f64::NAN)
    };
    let slack = |a: f64, b: f64| b <= a * (1.0 + 1e-9) + 1e-300;
    let mut refine_ok = true;
    for &eps in eps_values {
        for w in grids.windows(2) {
            refine_ok &= slack(lookup(w[0], eps), lookup(w[1], eps));
        }
    }
    rec.check("decreasing_under_refinement", refine_ok, "fixed eps, Nx increasing");
    if let Some(&finest) = grids.last() {
        let mut eps_sorted = eps_values.to_vec();
        eps_sorted.sort_by(|a, b| b.total_cmp(a));
        let plateau = 1e-12;
        let ok = eps_sorted.windows(2).all(|w| {
            let (a, b) = (lookup(finest, w[0]), lookup(finest, w[1]));
            slack(a, b) || b <= plateau
        });
        rec.check("decreasing_in_eps", ok, format!("finest grid {finest}"));
    }
    if let Some(t) = negative_horizon {
        let floor = points
            .iter()
            .zip(&results)
            .filter(|(p, _)| p.0 == t)
            .map(|(_, r)| r.0)
            .fold(f64::INFINITY, f64::min);
        rec.outputs.insert("negative_control_min_residual".into(), floor);
        rec.check("negative_control_floor", floor >= 0.3, format!("min residual {floor:.4}"));
    }
    rec.wall_seconds = start.elapsed().as_secs_f64();
    Ok(rec)
}

/// Gap between the optimal time of the augmented system and the original.
pub fn augmentation_limit_study(system: &HyperbolicSystem, eps_values: &[f64]) -> Result<StudyRecord> {
    let start = Instant::now();
    if system.m() <= system.k() {
        return Err(Error::Precondition("augmentation needs m > k".into()));
    }
    let mut rec = StudyRecord::new(
        "augmentation_limit",
        system_fingerprint(system),
        0,
        &["eps", "t_opt_augmented", "gap"],
    );
    rec.param("eps", format!("{eps_values:?}"));
    let base = t_opt(system.speeds())?.t_opt;
    rec.outputs.insert("t_opt".into(), base);
    let mut kept = Vec::new();
    for &eps in eps_values {
        match augment_system(system, eps) {
            Ok(aug) => {
                let t = t_opt(aug.speeds())?.t_opt;
                let gap = (t - base).abs();
                rec.rows.push(vec![eps, t, gap]);
                kept.push((eps, gap));
            }
            Err(e @ (Error::Ordering(_) | Error::InvalidSystem(_))) => {
                rec.flag(format!("eps = {eps} excluded: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    if kept.len() >= 2 {
        let sxy: f64 = kept.iter().map(|(e, g)| e * g).sum();
        let sxx: f64 = kept.iter().map(|(e, _)| e * e).sum();
        rec.outputs.insert("fit_constant".into(), sxy / sxx);
        let mut by_eps = kept.clone();
        by_eps.sort_by(|a, b| b.0.total_cmp(&a.0));
        let shrinking = by_eps.windows(2).all(|w| w[1].1 <= w[0].1);
        rec.check("gap_shrinks_with_eps", shrinking, format!("{by_eps:?}"));
    }
    let bounded = kept.iter().all(|(e, g)| *g <= 2.0 * e);
    rec.check("gap_le_2eps", bounded, "|t_opt(eps) - t_opt| <= 2 eps");
    rec.wall_seconds = start.elapsed().as_secs_f64();
    Ok(rec)
}
