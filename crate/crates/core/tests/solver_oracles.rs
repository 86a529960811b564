use hyperbolic_control::experiments::{calibration_system, k1m2_system, sampling};
use hyperbolic_control::hum::{apply_ft, apply_ft_star_with};
use hyperbolic_control::model::{Coupling, HyperbolicSystem, ProfileMatrix};
use hyperbolic_control::solver::{
    free_evolution, solve_dual_with, solve_primal, BoundaryQuadrature, ControlSignal, Grid, StateField,
    TrajectoryMode,
};

fn coupled_k1m2() -> HyperbolicSystem {
    k1m2_system()
        .with_coupling(Coupling::UForm(ProfileMatrix::constant(
            3,
            3,
            &[0.0, 0.4, -0.3, 0.0, 0.0, 0.2, 0.0, 0.0, 0.0],
        )))
        .unwrap()
}

/// Adjoint built column by column from the forward map applied to unit controls.
fn brute_force_adjoint(sys: &HyperbolicSystem, v: &StateField, t: f64, grid: &Grid) -> ControlSignal {
    let lattice = grid.lattice_for(sys.speeds(), t).unwrap();
    let mut out = ControlSignal::zeros(sys.m(), &lattice);
    for p in 0..sys.m() {
        for n in 0..lattice.steps {
            let mut e = ControlSignal::zeros(sys.m(), &lattice);
            e.values_mut()[[p, n]] = 1.0;
            out.values_mut()[[p, n]] = apply_ft(sys, &e, t, grid).unwrap().dot(v) / lattice.dt;
        }
    }
    out
}

#[test]
fn adjoint_matches_brute_force_transpose() {
    let grid = Grid::new(24, 0.8).unwrap();
    let t = 1.7;
    let mut rng = sampling::rng(21);
    for sys in [calibration_system(), k1m2_system(), coupled_k1m2()] {
        let v = sampling::smooth_state(&mut rng, sys.k(), sys.m(), &grid, 6);
        let direct = brute_force_adjoint(&sys, &v, t, &grid);
        let swept = apply_ft_star_with(&sys, &v, t, &grid, BoundaryQuadrature::Scheme).unwrap();
        let steps = direct.steps();
        let scale = direct.values().iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for p in 0..sys.m() {
            for n in 0..steps {
                let (a, b) = (direct.values()[[p, n]], swept.values()[[p, n]]);
                assert!((a - b).abs() <= 1e-12 * scale.max(1.0), "p {p} n {n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn free_evolution_duality_is_exact_for_the_scheme_transpose() {
    let grid = Grid::new(60, 0.9).unwrap();
    let t = 2.3;
    let mut rng = sampling::rng(22);
    for sys in [calibration_system(), coupled_k1m2()] {
        for _ in 0..5 {
            let w0 = sampling::smooth_state(&mut rng, sys.k(), sys.m(), &grid, 8);
            let vt = sampling::smooth_state(&mut rng, sys.k(), sys.m(), &grid, 8);
            let lhs = free_evolution(&sys, &w0, t, &grid).unwrap().dot(&vt);
            let dual = solve_dual_with(&sys, &vt, t, &grid, BoundaryQuadrature::Scheme).unwrap();
            let rhs = w0.dot(&dual.initial);
            assert!((lhs - rhs).abs() <= 1e-12 * (w0.norm() * vt.norm()), "{lhs} vs {rhs}");
        }
    }
}

#[test]
fn zero_data_stays_zero_and_max_norm_is_controlled() {
    let b = 0.7;
    let sys = HyperbolicSystem::constant(1, 1, &[1.0, 0.6], true, &[vec![b]]).unwrap();
    for cfl in [1.0, 0.9, 0.5] {
        let grid = Grid::new(100, cfl).unwrap();
        let t = 3.0;
        let lattice = grid.lattice_for(sys.speeds(), t).unwrap();
        let zero = StateField::zeros(1, 1, grid.nx());
        let sol = solve_primal(&sys, &zero, &ControlSignal::zeros(1, &lattice), t, &grid, TrajectoryMode::Full).unwrap();
        assert!(sol.terminal.values().iter().all(|&x| x == 0.0));

        let w0 = sampling::smooth_state(&mut sampling::rng(23), 1, 1, &grid, 10);
        let bound = w0.values().iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let sol = solve_primal(&sys, &w0, &ControlSignal::zeros(1, &lattice), t, &grid, TrajectoryMode::Full).unwrap();
        let traj = sol.trajectory.unwrap();
        for state in traj.states.iter() {
            let peak = state.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            assert!(peak <= bound * (1.0 + 1e-14), "cfl {cfl}: {peak} > {bound}");
        }
    }
}
