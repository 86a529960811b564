use super::*;
use crate::model::{
    BoundaryMatrix, Coupling, HyperbolicSystem, Profile, ProfileMatrix, SpeedProfile,
};

fn bump(x: f64) -> f64 {
    0.5 * (1.0 - (2.0 * std::f64::consts::PI * x).cos())
}

fn calibration(b: f64) -> HyperbolicSystem {
    HyperbolicSystem::constant(1, 1, &[1.0, 1.0], true, &[vec![b]]).unwrap()
}

fn smooth(seed: usize, x: f64) -> f64 {
    let s = seed as f64;
    (1.0 + s).sin() * (std::f64::consts::PI * x).sin()
        + 0.5 * (2.0 + s).cos() * (3.0 * std::f64::consts::PI * x + s).sin()
}

fn solve(sys: &HyperbolicSystem, w0: &StateField, u: &ControlSignal, t: f64, g: &Grid) -> StateField {
    solve_primal(sys, w0, u, t, g, TrajectoryMode::Off).unwrap().terminal
}

#[test]
fn unit_courant_is_an_exact_shift() {
    let sys = calibration(1.0);
    let g = Grid::new(200, 1.0).unwrap();
    let w0 = StateField::from_fn(1, 1, &g, |i, x| if i == 1 { bump(x) } else { 0.0 });
    let t = 0.3;
    let lat = g.lattice_for(sys.speeds(), t).unwrap();
    assert_eq!(lat.steps, 60);
    let u = ControlSignal::zeros(1, &lat);
    let w = solve(&sys, &w0, &u, t, &g);
    for j in 0..=200 {
        let expect_plus = if j + 60 <= 200 { w0.values()[[1, j + 60]] } else { 0.0 };
        assert_eq!(w.values()[[1, j]], expect_plus, "plus node {j}");
        let expect_minus = if j <= 60 { w0.values()[[1, 60 - j]] } else { 0.0 };
        assert_eq!(w.values()[[0, j]], expect_minus, "minus node {j}");
    }
}

#[test]
fn finite_propagation_speed() {
    let sys = HyperbolicSystem::constant(1, 1, &[0.7, 1.0], true, &[vec![0.5]]).unwrap();
    let g = Grid::new(100, 0.8).unwrap();
    let t = 0.4;
    let lat = g.lattice_for(sys.speeds(), t).unwrap();
    let w0 = StateField::zeros(1, 1, 100);
    let u = ControlSignal::from_fn(1, &lat, |_, _| 1.0);
    let w = solve(&sys, &w0, &u, t, &g);
    // one cell per step at most
    for j in 0..100usize.saturating_sub(lat.steps) {
        assert_eq!(w.values()[[1, j]], 0.0);
        assert_eq!(w.values()[[0, j]], 0.0);
    }
    assert!(w.values()[[1, 99]] > 0.0);
}

fn characteristic_calibration(t: f64, x: f64) -> (f64, f64) {
    let plus = if x + t <= 1.0 { bump(x + t) } else { 0.0 };
    let minus = if x <= t { bump(t - x) } else { 0.0 };
    (minus, plus)
}

#[test]
fn first_order_convergence_to_characteristics() {
    let sys = calibration(1.0);
    let t = 0.5;
    let mut errors = Vec::new();
    for nx in [100, 200, 400, 800] {
        let g = Grid::new(nx, 0.9).unwrap();
        let lat = g.lattice_for(sys.speeds(), t).unwrap();
        let w0 = StateField::from_fn(1, 1, &g, |i, x| if i == 1 { bump(x) } else { 0.0 });
        let w = solve(&sys, &w0, &ControlSignal::zeros(1, &lat), t, &g);
        let mut err = 0.0f64;
        for j in 0..=nx {
            let (m, p) = characteristic_calibration(t, g.node(j));
            err = err.max((w.values()[[0, j]] - m).abs()).max((w.values()[[1, j]] - p).abs());
        }
        errors.push(err);
    }
    for w in errors.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!(rate > 0.8 && rate < 1.3, "rate {rate}, errors {errors:?}");
    }
}

#[test]
fn dual_matches_characteristics_without_coupling() {
    let b = 0.7;
    let sys = calibration(b);
    let nx = 100;
    let g = Grid::new(nx, 1.0).unwrap();
    let t = 0.6;
    let gfun = |x: f64| bump(x) * x;
    let hfun = |x: f64| (3.0 * x).sin();
    let vt = StateField::from_fn(1, 1, &g, |i, x| if i == 0 { gfun(x) } else { hfun(x) });
    let sol = solve_dual(&sys, &vt, t, &g).unwrap();
    let s = t;
    for j in 1..nx {
        let x = g.node(j);
        let minus = if x + s <= 1.0 + 1e-12 { gfun(x + s) } else { 0.0 };
        let plus = if x >= s - 1e-12 { hfun(x - s) } else { b * gfun(s - x) };
        assert!((sol.initial.values()[[0, j]] - minus).abs() < 1e-12, "minus {j}");
        assert!((sol.initial.values()[[1, j]] - plus).abs() < 1e-12, "plus {j}");
    }
    // Outgoing trace at x = 1: plus dual leaving the domain.
    let lat = g.lattice_for(sys.speeds(), t).unwrap();
    for n in 0..lat.steps {
        let s = t - lat.time(n + 1);
        let x = 1.0 - g.dx();
        let v = if x >= s - 1e-12 { hfun(x - s) } else { b * gfun(s - x) };
        assert!((sol.trace.values()[[0, n]] - v).abs() < 1e-12);
    }
}

fn varied_systems() -> Vec<HyperbolicSystem> {
    let nq = 33;
    let mut out = Vec::new();
    // k = 1, m = 2, variable speeds, u-form coupling
    let speeds = SpeedProfile::new(
        1,
        2,
        vec![
            Profile::sampled(nq, |x| 1.0 + 0.3 * x),
            Profile::sampled(nq, |x| 0.8 + 0.1 * (3.0 * x).sin()),
            Profile::sampled(nq, |x| 1.6 - 0.2 * x),
        ],
    )
    .unwrap();
    let mut s = ProfileMatrix::zeros(3, 3);
    s.set(0, 1, Profile::sampled(nq, |x| 1.0 - x));
    s.set(0, 2, Profile::Constant(0.4));
    s.set(1, 2, Profile::sampled(nq, |x| x * x));
    out.push(
        HyperbolicSystem::new(
            speeds.clone(),
            Coupling::UForm(s),
            BoundaryMatrix::from_rows(&[vec![0.5, -1.2]]).unwrap(),
        )
        .unwrap(),
    );
    // same speeds, w-form coupling
    let c = ProfileMatrix::from_entries(
        3,
        3,
        (0..9)
            .map(|e| Profile::sampled(nq, move |x| ((e as f64) * 0.7 + x).sin()))
            .collect(),
    );
    out.push(
        HyperbolicSystem::new(
            speeds,
            Coupling::WForm(c),
            BoundaryMatrix::from_rows(&[vec![0.5, -1.2]]).unwrap(),
        )
        .unwrap(),
    );
    // k = 2, m = 1
    out.push(
        HyperbolicSystem::new(
            SpeedProfile::constant(2, 1, &[1.5, 1.0, 1.2]).unwrap(),
            Coupling::UForm(ProfileMatrix::constant(3, 3, &[0., 0., 0.3, 0., 0., -0.5, 0., 0., 0.])),
            BoundaryMatrix::from_rows(&[vec![0.9], vec![-0.4]]).unwrap(),
        )
        .unwrap(),
    );
    out
}

#[test]
fn scheme_quadrature_gives_exact_transpose() {
    for sys in varied_systems() {
        let (k, m) = (sys.k(), sys.m());
        for nx in [24, 61] {
            let g = Grid::new(nx, 0.85).unwrap();
            let t = 1.3;
            let lat = g.lattice_for(sys.speeds(), t).unwrap();
            let w0 = StateField::from_fn(k, m, &g, smooth);
            let vt = StateField::from_fn(k, m, &g, |i, x| smooth(i + 7, x));
            let u = ControlSignal::from_fn(m, &lat, |p, s| smooth(p + 3, s / t));
            let w = solve(&sys, &w0, &u, t, &g);
            let d = solve_dual_with(&sys, &vt, t, &g, BoundaryQuadrature::Scheme).unwrap();
            let lhs = w.dot(&vt);
            let rhs = w0.dot(&d.initial) + u.dot(&d.trace);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()),
                "{} coupling, nx {nx}: {lhs} vs {rhs}",
                sys.coupling().form_name()
            );
        }
    }
}

#[test]
fn trapezoid_gap_is_first_order_and_vanishes_without_coupling() {
    let mut sys = calibration(1.0);
    let t = 2.5;
    let gap = |sys: &HyperbolicSystem, nx: usize| {
        let g = Grid::new(nx, 1.0).unwrap();
        let lat = g.lattice_for(sys.speeds(), t).unwrap();
        let vt = StateField::from_fn(1, 1, &g, |i, x| smooth(i + 1, x));
        let u = ControlSignal::from_fn(1, &lat, |_, s| smooth(5, s));
        let w = solve(sys, &StateField::zeros(1, 1, nx), &u, t, &g);
        let d = solve_dual(sys, &vt, t, &g).unwrap();
        (w.dot(&vt) - u.dot(&d.trace)).abs()
    };
    assert!(gap(&sys, 100) < 1e-13);
    sys = sys
        .with_coupling(Coupling::UForm(ProfileMatrix::constant(2, 2, &[0., 1., 0., 0.])))
        .unwrap();
    let g1 = gap(&sys, 200);
    let g2 = gap(&sys, 400);
    assert!(g1 > 1e-8);
    let ratio = g1 / g2;
    assert!(ratio > 1.6 && ratio < 2.5, "ratio {ratio}");
}

#[test]
fn trajectory_modes() {
    let sys = calibration(1.0);
    let g = Grid::new(16, 1.0).unwrap();
    let t = 0.5;
    let lat = g.lattice_for(sys.speeds(), t).unwrap();
    let w0 = StateField::from_fn(1, 1, &g, |_, x| x);
    let u = ControlSignal::zeros(1, &lat);
    let full = solve_primal(&sys, &w0, &u, t, &g, TrajectoryMode::Full).unwrap();
    let tr = full.trajectory.unwrap();
    assert_eq!(tr.len(), lat.steps + 1);
    assert_eq!(tr.states.back().unwrap(), full.terminal.values());
    let ring = solve_primal(&sys, &w0, &u, t, &g, TrajectoryMode::Ring(3)).unwrap();
    let rt = ring.trajectory.unwrap();
    assert_eq!(rt.len(), 3);
    assert_eq!(rt.times.back().copied(), Some(t));
    let off = solve_primal(&sys, &w0, &u, t, &g, TrajectoryMode::Off).unwrap();
    assert!(off.trajectory.is_none());

    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &rt, &g).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t,x,component,value\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 2 * 17);
}

#[test]
fn shape_mismatches_are_rejected() {
    let sys = calibration(1.0);
    let g = Grid::new(16, 1.0).unwrap();
    let lat = g.lattice_for(sys.speeds(), 1.0).unwrap();
    let u = ControlSignal::zeros(1, &lat);
    assert!(solve_primal(&sys, &StateField::zeros(1, 1, 17), &u, 1.0, &g, TrajectoryMode::Off).is_err());
    assert!(solve_primal(&sys, &StateField::zeros(1, 1, 16), &u, 0.5, &g, TrajectoryMode::Off).is_err());
    assert!(solve_dual(&sys, &StateField::zeros(1, 2, 16), 1.0, &g).is_err());
}
