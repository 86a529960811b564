//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::time::{Duration, Instant};

use hyperbolic_control::experiments::{
    adjoint_consistency_study, calibration_initial_state, calibration_system, k1m2_bumps,
    k1m2_system, sampling,
};
use hyperbolic_control::hum::{
    gramian_apply, observability_constant, synthesize_exact_control, synthesize_null_control,
    HumOptions, ObservabilityOptions, ObservabilityVariant,
};
use hyperbolic_control::model::{
    augment_system, in_class_b, in_class_be, t_opt, time_reverse_reduction, BoundaryMatrix,
    Coupling, HyperbolicSystem, Matrix, Profile, ProfileMatrix, SpeedProfile,
};
use hyperbolic_control::solver::{solve_primal, ControlSignal, Grid, TrajectoryMode};
use rand::Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn run(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let ok = v.passed && in_time;
    println!(
        "[{}] {id:>2} {name}: {} | runtime {:.3?} (limit {:?}{})",
        if ok { "PASS" } else { "FAIL" },
        v.detail,
        elapsed,
        limit,
        if in_time { "" } else { ", exceeded" }
    );
    ok
}

fn criterion_times() -> Verdict {
    let cal = calibration_system();
    let start = Instant::now();
    let r = t_opt(cal.speeds()).unwrap();
    let ramp = SpeedProfile::new(
        1,
        1,
        vec![Profile::sampled(1024, |x| 2.0 + x), Profile::sampled(1024, |x| 1.0 + x)],
    )
    .unwrap();
    let tau_ramp = hyperbolic_control::model::tau(&ramp, 1).unwrap();
    let compute = start.elapsed();
    let err = (tau_ramp - std::f64::consts::LN_2).abs();
    let exact = r.tau == vec![1.0, 1.0] && r.t_opt == 2.0;
    verdict(
        exact && err <= 1e-6 && compute < Duration::from_millis(1),
        format!(
            "tau = {:?}, t_opt = {}; ramp |tau - ln 2| = {err:.2e}; compute {compute:.2?}",
            r.tau, r.t_opt
        ),
    )
}

fn random_matrix(rng: &mut sampling::StudyRng, k: usize, m: usize) -> Matrix {
    let data = (0..k * m).map(|_| rng.random_range(-2.0..2.0)).collect();
    Matrix::from_row_major(k, m, data).unwrap()
}

fn criterion_classes() -> Verdict {
    let mut rng = sampling::rng(2);
    let (mut nest_checked, mut nest_bad, mut m1_bad, mut planted, mut planted_bad) = (0, 0, 0, 0, 0);
    for trial in 0..1000 {
        let k = rng.random_range(1..=4usize);
        let m = rng.random_range(1..=4usize);
        let mut b = random_matrix(&mut rng, k, m);
        if trial % 3 == 0 {
            // force some near-degenerate trailing entries
            b[(k - 1, m - 1)] = 0.0;
        }
        let in_b = in_class_b(&b, k, m).unwrap();
        if m >= k {
            nest_checked += 1;
            if in_class_be(&b, k, m).unwrap() && !in_b {
                nest_bad += 1;
            }
        }
        if m == 1 && !in_b {
            m1_bad += 1;
        }
        let top = k.min(m.saturating_sub(1));
        if top >= 1 {
            let order = rng.random_range(1..=top);
            let mut p = b.clone();
            let (r0, c0) = (k - order, m - order);
            // last row of the trailing block becomes a combination of the others
            for c in 0..order {
                let mut v = 0.0;
                for r in 0..order - 1 {
                    v += 0.5 * p[(r0 + r, c0 + c)];
                }
                p[(k - 1, c0 + c)] = v;
            }
            planted += 1;
            if in_class_b(&p, k, m).unwrap() {
                planted_bad += 1;
            }
        }
    }
    verdict(
        nest_bad == 0 && m1_bad == 0 && planted_bad == 0 && planted > 0,
        format!(
            "nesting violations {nest_bad}/{nest_checked}, m = 1 rejections {m1_bad}, planted singular accepted {planted_bad}/{planted}"
        ),
    )
}

fn criterion_transport() -> Verdict {
    let b = 0.7;
    let sys = HyperbolicSystem::constant(1, 1, &[1.0, 1.0], true, &[vec![b]]).unwrap();
    let nx = 400;
    let grid = Grid::new(nx, 1.0).unwrap();
    let t = 0.7;
    let lattice = grid.lattice_for(sys.speeds(), t).unwrap();
    let s = lattice.steps;
    let w0 = sampling::smooth_state(&mut sampling::rng(3), 1, 1, &grid, 8);
    let sol = solve_primal(&sys, &w0, &ControlSignal::zeros(1, &lattice), t, &grid, TrajectoryMode::Off).unwrap();
    let (p0, m0) = (w0.component(1), w0.component(0));
    let plus_at = |j: usize| if j < nx { p0[j] } else { 0.0 };
    let mut mismatches = 0;
    for j in 0..=nx {
        let plus = plus_at(j + s);
        let minus = if j > s { m0[j - s] } else { b * plus_at(s - j) };
        if sol.terminal.values()[[1, j]].to_bits() != plus.to_bits() && j < nx {
            mismatches += 1;
        }
        if sol.terminal.values()[[0, j]].to_bits() != minus.to_bits() {
            mismatches += 1;
        }
    }
    verdict(
        mismatches == 0,
        format!("Nx = {nx}, {s} steps, bitwise mismatches {mismatches}"),
    )
}

fn coupled_calibration() -> HyperbolicSystem {
    calibration_system()
        .with_coupling(Coupling::UForm(ProfileMatrix::constant(2, 2, &[0.0, 1.0, 0.0, 0.0])))
        .unwrap()
}

fn criterion_adjoint() -> Verdict {
    let rec = adjoint_consistency_study(&coupled_calibration(), 2.4, &[100, 200], 1.0, 50, 4).unwrap();
    let g100 = rec.rows[0][1];
    let g200 = rec.rows[1][1];
    let ratio = g100 / g200;
    verdict(
        g100 <= 5e-2 && (1.6..=2.4).contains(&ratio),
        format!("max relative gap {g100:.3e} (Nx 100), {g200:.3e} (Nx 200), ratio {ratio:.3}"),
    )
}

fn criterion_gramian() -> Verdict {
    let sys = calibration_system();
    let grid = Grid::new(200, 0.9).unwrap();
    let t = 2.4;
    let mut rng = sampling::rng(5);
    let (mut worst_sym, mut worst_psd) = (0.0f64, f64::INFINITY);
    for _ in 0..50 {
        let u = sampling::smooth_state(&mut rng, 1, 1, &grid, 12);
        let v = sampling::smooth_state(&mut rng, 1, 1, &grid, 12);
        let lu = gramian_apply(&sys, &u, t, &grid, 0.0).unwrap();
        let lv = gramian_apply(&sys, &v, t, &grid, 0.0).unwrap();
        let (a, b) = (lu.dot(&v), u.dot(&lv));
        let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        worst_sym = worst_sym.max((a - b).abs() / scale);
        worst_psd = worst_psd.min(lv.dot(&v) / v.dot(&v));
    }
    verdict(
        worst_sym <= 1e-10 && worst_psd >= -1e-12,
        format!("max relative asymmetry {worst_sym:.2e}, min <Λv,v>/|v|² {worst_psd:.4e}"),
    )
}

fn null_residual(nx: usize, t: f64) -> (f64, String) {
    let sys = calibration_system();
    let grid = Grid::new(nx, 0.9).unwrap();
    let w0 = calibration_initial_state(&grid);
    let r = synthesize_null_control(&sys, &w0, t, &grid, &HumOptions::default()).unwrap();
    let note = format!(
        "Nx {nx}: {:.4e} (cg {} its{})",
        r.terminal_residual_norm,
        r.cg_iterations,
        if r.cg_converged { "" } else { ", cap" }
    );
    (r.terminal_residual_norm, note)
}

fn criterion_null() -> Verdict {
    let (r400, n400) = null_residual(400, 2.4);
    let (r800, n800) = null_residual(800, 2.4);
    verdict(r400 <= 1e-2 && r800 < r400, format!("{n400}; {n800}"))
}

/// Fraction of the initial energy that no control can remove before `t`:
/// plus data at `s ∈ [t - 1, 1]` reflects at x = 0 and is still inside the
/// domain as minus data at time `t`.
fn unreachable_floor(t: f64) -> f64 {
    let n = 200_000;
    let simpson = |a: f64, b: f64| {
        let h = (b - a) / n as f64;
        let f = |s: f64| sampling::raised_cosine(s).powi(2);
        let mut acc = f(a) + f(b);
        for i in 1..n {
            acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    (simpson((t - 1.0).max(0.0), 1.0) / simpson(0.0, 1.0)).sqrt()
}

fn criterion_below() -> Verdict {
    let floor = unreachable_floor(1.6);
    let mut ok = true;
    let mut notes = vec![format!("oracle floor {floor:.4}")];
    for nx in [200, 400, 800] {
        let (r, note) = null_residual(nx, 1.6);
        ok &= r >= 0.3 && (r - floor).abs() <= 0.1 * floor;
        notes.push(note);
    }
    verdict(ok, notes.join("; "))
}

fn criterion_observability() -> Verdict {
    let sys = calibration_system();
    let grid = Grid::new(400, 0.9).unwrap();
    let opts = ObservabilityOptions::default();
    let lo = observability_constant(&sys, 1.8, &grid, ObservabilityVariant::Null, &opts).unwrap();
    let hi = observability_constant(&sys, 2.2, &grid, ObservabilityVariant::Null, &opts).unwrap();
    let ratio = hi.constant_estimate / lo.constant_estimate;
    verdict(
        ratio >= 1e3,
        format!(
            "C(1.8) = {:.3e}, C(2.2) = {:.3e}{}, ratio {ratio:.3e}",
            lo.constant_estimate,
            hi.constant_estimate,
            if hi.degenerate { " (denominator vanishes)" } else { "" }
        ),
    )
}

fn criterion_exact() -> Verdict {
    let sys = k1m2_system();
    let be = in_class_be(sys.boundary().matrix(), 1, 2).unwrap();
    let topt = t_opt(sys.speeds()).unwrap().t_opt;
    let grid = Grid::new(400, 0.9).unwrap();
    let (w0, wt) = k1m2_bumps(&grid);
    let r = synthesize_exact_control(&sys, &w0, &wt, 1.2 * topt, &grid, &HumOptions::default()).unwrap();
    verdict(
        be && r.terminal_residual_norm <= 1e-2,
        format!(
            "B in Be: {be}, T = {:.2}, residual {:.4e} (cg {} its{})",
            1.2 * topt,
            r.terminal_residual_norm,
            r.cg_iterations,
            if r.cg_converged { "" } else { ", cap" }
        ),
    )
}

fn criterion_reductions() -> Verdict {
    let mut rng = sampling::rng(10);
    let mut done = 0;
    let mut bad = 0;
    while done < 100 {
        let k = rng.random_range(1..=4usize);
        let b = random_matrix(&mut rng, k, k);
        if !in_class_be(&b, k, k).unwrap() || b.determinant().unwrap().abs() < 1e-6 {
            continue;
        }
        let speeds: Vec<f64> = (0..k).map(|i| (k - i) as f64 + 0.5).chain((0..k).map(|i| 1.0 + i as f64)).collect();
        let sys = HyperbolicSystem::new(
            SpeedProfile::constant(k, k, &speeds).unwrap(),
            Coupling::zero_u(2 * k),
            BoundaryMatrix::new(b),
        )
        .unwrap();
        let rev = time_reverse_reduction(&sys).unwrap();
        if !(rev.inverse_in_class_b && in_class_b(&rev.inverse, k, k).unwrap()) {
            bad += 1;
        }
        done += 1;
    }
    let base = t_opt(k1m2_system().speeds()).unwrap().t_opt;
    let mut gaps = Vec::new();
    let mut gap_ok = true;
    for eps in [0.1, 0.01, 0.001] {
        let aug = augment_system(&k1m2_system(), eps).unwrap();
        let gap = (t_opt(aug.speeds()).unwrap().t_opt - base).abs();
        gap_ok &= gap <= 2.0 * eps;
        gaps.push(format!("{eps}: {gap:.3e}"));
    }
    verdict(
        bad == 0 && gap_ok,
        format!("inverse outside B: {bad}/100; augmentation gaps [{}]", gaps.join(", ")),
    )
}

fn criterion_russell() -> Verdict {
    let mut rng = sampling::rng(11);
    let (mut wide, mut tall, mut bad) = (0, 0, 0);
    for i in 0..100 {
        let (k, m) = if i % 2 == 0 {
            let k = rng.random_range(1..=3usize);
            (k, k + rng.random_range(0..=2usize))
        } else {
            let m = rng.random_range(1..=3usize);
            (m + rng.random_range(1..=2usize), m)
        };
        if m >= k { wide += 1 } else { tall += 1 }
        let p = sampling::random_speed_profile(&mut rng, k, m, 33);
        let r = t_opt(&p).unwrap();
        if r.t_opt > r.russell_time * (1.0 + 1e-12) {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("violations {bad}/100 ({wide} with m >= k, {tall} with m < k)"))
}

fn main() {
    let sec = Duration::from_secs;
    let results = [
        run(1, "travel and optimal times", Duration::from_millis(1), criterion_times),
        run(2, "boundary matrix classes", sec(1), criterion_classes),
        run(3, "unit-Courant transport exactness", sec(1), criterion_transport),
        run(4, "adjoint consistency", sec(30), criterion_adjoint),
        run(5, "Gramian symmetry and semidefiniteness", sec(60), criterion_gramian),
        run(6, "null control above the optimal time", sec(300), criterion_null),
        run(7, "no null control below the optimal time", sec(300), criterion_below),
        run(8, "observability transition", sec(600), criterion_observability),
        run(9, "exact control k = 1, m = 2", sec(300), criterion_exact),
        run(10, "time reversal and augmentation", sec(10), criterion_reductions),
        run(11, "Russell bound", sec(1), criterion_russell),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
