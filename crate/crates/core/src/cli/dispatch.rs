//! Subcommand implementations.
//!
//! Output files (all floats with 17 significant digits):
//!
//! | command | file | columns |
//! |---|---|---|
//! | `times` | `times.csv` | `quantity,value` (`tau_1..tau_n`, `t_opt`, `russell_time`) |
//! | `check-b` | `check_b.csv` | `class,member,checked_orders,failing_order` |
//! | `simulate` | `terminal.csv` | `x,w1,...,wn` |
//! | `simulate --store-trajectory` | `trajectory.csv` | `t,x,component,value` |
//! | `control` | `report.csv` | `quantity,value` |
//! | `control` | `control.csv` | `t,u1,...,um` |
//! | `control` | `terminal.csv` | `x,w1,...,wn` |
//! | `observability` | `observability.csv` | `T,constant_estimate,iterations,residual` |
//! | `scan` | `observability_scan.csv` (+ `.meta`) | `T,constant_estimate,iterations,residual` |
//! | `duality` | `adjoint_consistency.csv` (+ `.meta`) | `nx,max_relative_gap` |
//! | `study NAME` | `<study>.csv` + `<study>.meta` | per study |

use std::fs::{self, File};
use std::io::Write;
use std::path::Path;

use super::config::{ControlMode, DataSpec, RunConfig};
use crate::error::{Error, Result};
use crate::experiments::{
    adjoint_consistency_study, augmentation_limit_study, k1m2_system, null_control_convergence,
    observability_scan, russell_comparison, sampling, StudyRecord,
};
use crate::hum::{
    observability_constant, synthesize_exact_control, synthesize_null_control, GramianReport,
    HumOptions, ObservabilityOptions, ObservabilityVariant,
};
use crate::model::{class_b_report, class_be_report, t_opt, HyperbolicSystem, Tolerances};
use crate::solver::{
    solve_primal, write_control_csv, write_state_csv, write_trajectory_csv, ControlSignal, Grid,
    StateField, TrajectoryMode,
};

pub const STUDY_NAMES: &[&str] = &[
    "adjoint-consistency",
    "observability-scan",
    "russell-comparison",
    "null-control-convergence",
    "augmentation-limit",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Times,
    CheckB,
    Simulate,
    Control,
    Observability,
    Scan,
    Duality,
    Study(String),
}

/// Whether every machine-checked assertion of a command held.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    AssertionFailed,
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_pairs(path: &Path, rows: &[(String, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["quantity", "value"])?;
    for (q, v) in rows {
        w.write_record([q.clone(), fmt(*v)])?;
    }
    w.flush()?;
    Ok(())
}

fn state_from_specs(system: &HyperbolicSystem, grid: &Grid, specs: Option<&Vec<DataSpec>>, default_plus: bool) -> StateField {
    let (k, m) = (system.k(), system.m());
    match specs {
        Some(s) => StateField::from_fn(k, m, grid, |i, x| s[i].eval(x)),
        None if default_plus => {
            StateField::from_fn(k, m, grid, |i, x| if i >= k { sampling::raised_cosine(x) } else { 0.0 })
        }
        None => StateField::zeros(k, m, grid.nx()),
    }
}

fn horizon(cfg: &RunConfig, system: &HyperbolicSystem) -> Result<f64> {
    match cfg.horizon {
        Some(t) => Ok(t),
        None => Ok(1.2 * t_opt(system.speeds())?.t_opt),
    }
}

fn hum_options(cfg: &RunConfig) -> HumOptions {
    HumOptions {
        eps: cfg.eps,
        cg_tol: cfg.cg_tol,
        cg_maxit: cfg.cg_maxit,
        experimental: cfg.experimental,
        ..HumOptions::default()
    }
}

fn observability_options(cfg: &RunConfig) -> ObservabilityOptions {
    ObservabilityOptions {
        eps: cfg.eps,
        cg_tol: cfg.cg_tol,
        cg_maxit: cfg.cg_maxit,
        experimental: cfg.experimental,
        ..ObservabilityOptions::default()
    }
}

fn variant(cfg: &RunConfig) -> ObservabilityVariant {
    match cfg.mode {
        ControlMode::Null => ObservabilityVariant::Null,
        ControlMode::Exact => ObservabilityVariant::Exact,
    }
}

fn finish_study(rec: &StudyRecord, out_dir: &Path, console: &mut dyn Write) -> Result<Outcome> {
    rec.write_to(out_dir)?;
    for a in &rec.assertions {
        writeln!(console, "{}: {} ({})", a.name, if a.passed { "pass" } else { "FAIL" }, a.detail)?;
    }
    for f in &rec.flags {
        writeln!(console, "note: {f}")?;
    }
    for (k, v) in &rec.outputs {
        writeln!(console, "{k} = {v}")?;
    }
    writeln!(console, "wrote {}", out_dir.join(format!("{}.csv", rec.name)).display())?;
    Ok(if rec.passed() { Outcome::Passed } else { Outcome::AssertionFailed })
}

fn write_report(path: &Path, r: &GramianReport) -> Result<()> {
    write_pairs(
        path,
        &[
            ("cg_iterations".into(), r.cg_iterations as f64),
            ("cg_residual".into(), r.cg_residual),
            ("cg_converged".into(), if r.cg_converged { 1.0 } else { 0.0 }),
            ("terminal_residual_norm".into(), r.terminal_residual_norm),
            ("eps".into(), r.eps),
            ("gramian_norm".into(), r.gramian_norm),
            ("control_norm".into(), r.control.norm()),
        ],
    )
}

pub fn dispatch(
    command: &Command,
    cfg: &RunConfig,
    system: &HyperbolicSystem,
    console: &mut dyn Write,
) -> Result<Outcome> {
    let out = cfg.out_dir.as_path();
    fs::create_dir_all(out)?;
    match command {
        Command::Times => {
            let r = t_opt(system.speeds())?;
            let taus: Vec<String> = r.tau.iter().map(|t| format!("{t}")).collect();
            writeln!(console, "tau = ({})", taus.join(", "))?;
            writeln!(console, "t_opt = {}", r.t_opt)?;
            writeln!(console, "russell_time = {}", r.russell_time)?;
            let mut rows: Vec<(String, f64)> =
                r.tau.iter().enumerate().map(|(i, t)| (format!("tau_{}", i + 1), *t)).collect();
            rows.push(("t_opt".into(), r.t_opt));
            rows.push(("russell_time".into(), r.russell_time));
            write_pairs(&out.join("times.csv"), &rows)?;
            Ok(Outcome::Passed)
        }
        Command::CheckB => {
            let b = system.boundary().matrix();
            let tol = Tolerances::default().det_tol;
            let mut w = csv::Writer::from_path(out.join("check_b.csv"))?;
            w.write_record(["class", "member", "checked_orders", "failing_order"])?;
            let rb = class_b_report(b, tol);
            let describe = |name: &str, member: bool, failing: Option<usize>| match failing {
                _ if member => format!("in class {name}"),
                Some(o) => format!("not in class {name} (trailing {o}×{o} singular)"),
                None => format!("not in class {name}"),
            };
            writeln!(console, "{}", describe("B", rb.member, rb.failing_order))?;
            w.write_record([
                "B".to_string(),
                rb.member.to_string(),
                rb.max_order.to_string(),
                rb.failing_order.map(|o| o.to_string()).unwrap_or_default(),
            ])?;
            match class_be_report(b, tol) {
                Ok(re) => {
                    writeln!(console, "{}", describe("Be", re.member, re.failing_order))?;
                    w.write_record([
                        "Be".to_string(),
                        re.member.to_string(),
                        re.max_order.to_string(),
                        re.failing_order.map(|o| o.to_string()).unwrap_or_default(),
                    ])?;
                }
                Err(_) => {
                    writeln!(console, "class Be not applicable (m < k)")?;
                    w.write_record(["Be", "not_applicable", "", ""])?;
                }
            }
            w.flush()?;
            Ok(Outcome::Passed)
        }
        Command::Simulate => {
            let grid = cfg.grid()?;
            let t = horizon(cfg, system)?;
            let lattice = grid.lattice_for(system.speeds(), t)?;
            let w0 = state_from_specs(system, &grid, cfg.initial.as_ref(), true);
            let control = match &cfg.control {
                Some(specs) => ControlSignal::from_fn(system.m(), &lattice, |p, s| specs[p].eval(s / t)),
                None => ControlSignal::zeros(system.m(), &lattice),
            };
            let mode = if cfg.store_trajectory { TrajectoryMode::Full } else { TrajectoryMode::Off };
            let sol = solve_primal(system, &w0, &control, t, &grid, mode)?;
            write_state_csv(File::create(out.join("terminal.csv"))?, &sol.terminal)?;
            if let Some(tr) = &sol.trajectory {
                write_trajectory_csv(File::create(out.join("trajectory.csv"))?, tr, &grid)?;
            }
            writeln!(console, "T = {t}, steps = {}, |w(T)| = {}", lattice.steps, sol.terminal.norm())?;
            Ok(Outcome::Passed)
        }
        Command::Control => {
            let grid = cfg.grid()?;
            let t = horizon(cfg, system)?;
            let w0 = state_from_specs(system, &grid, cfg.initial.as_ref(), true);
            let opts = hum_options(cfg);
            let report = match cfg.mode {
                ControlMode::Null => synthesize_null_control(system, &w0, t, &grid, &opts)?,
                ControlMode::Exact => {
                    let wt = state_from_specs(system, &grid, cfg.target.as_ref(), false);
                    synthesize_exact_control(system, &w0, &wt, t, &grid, &opts)?
                }
            };
            for w in &report.warnings {
                writeln!(console, "warning: {w}")?;
            }
            writeln!(
                console,
                "{} control, T = {t}: terminal residual {:.6e}, cg iterations {}, cg residual {:.3e}",
                cfg.mode.as_str(),
                report.terminal_residual_norm,
                report.cg_iterations,
                report.cg_residual
            )?;
            write_report(&out.join("report.csv"), &report)?;
            write_control_csv(File::create(out.join("control.csv"))?, &report.control)?;
            write_state_csv(File::create(out.join("terminal.csv"))?, &report.terminal)?;
            Ok(Outcome::Passed)
        }
        Command::Observability => {
            let grid = cfg.grid()?;
            let t = horizon(cfg, system)?;
            let e = observability_constant(system, t, &grid, variant(cfg), &observability_options(cfg))?;
            let mut w = csv::Writer::from_path(out.join("observability.csv"))?;
            w.write_record(["T", "constant_estimate", "iterations", "residual"])?;
            w.write_record([fmt(e.horizon), fmt(e.constant_estimate), e.iterations.to_string(), fmt(e.residual)])?;
            w.flush()?;
            writeln!(
                console,
                "{} observability constant at T = {t}: {:.6e}{}",
                e.method,
                e.constant_estimate,
                if e.degenerate { " (denominator vanishes; capped)" } else { "" }
            )?;
            Ok(Outcome::Passed)
        }
        Command::Scan => {
            let grid = cfg.grid()?;
            let topt = t_opt(system.speeds())?.t_opt;
            let ts = cfg
                .scan
                .clone()
                .unwrap_or_else(|| [0.5, 0.8, 0.9, 1.1, 1.2, 1.5].iter().map(|f| f * topt).collect());
            let rec = observability_scan(system, &ts, &grid, variant(cfg), &observability_options(cfg))?;
            finish_study(&rec, out, console)
        }
        Command::Duality => {
            let t = horizon(cfg, system)?;
            let grids = cfg.grids.clone().unwrap_or_else(|| vec![cfg.nx, 2 * cfg.nx]);
            let rec = adjoint_consistency_study(system, t, &grids, cfg.cfl, cfg.trials, cfg.seed)?;
            finish_study(&rec, out, console)
        }
        Command::Study(name) => {
            let rec = run_study(name, cfg, system)?;
            finish_study(&rec, out, console)
        }
    }
}

/// Run a named study with parameters taken from the configuration.
pub fn run_study(name: &str, cfg: &RunConfig, system: &HyperbolicSystem) -> Result<StudyRecord> {
    let topt = t_opt(system.speeds())?.t_opt;
    match name {
        "adjoint-consistency" => {
            let t = horizon(cfg, system)?;
            let grids = cfg.grids.clone().unwrap_or_else(|| vec![50, 100, 200, 400]);
            adjoint_consistency_study(system, t, &grids, cfg.cfl, cfg.trials, cfg.seed)
        }
        "observability-scan" => {
            let ts = cfg
                .scan
                .clone()
                .unwrap_or_else(|| [0.5, 0.8, 0.9, 1.1, 1.2, 1.5].iter().map(|f| f * topt).collect());
            observability_scan(system, &ts, &cfg.grid()?, variant(cfg), &observability_options(cfg))
        }
        "russell-comparison" => {
            let mut r = sampling::rng(cfg.seed);
            let mut profiles = vec![system.speeds().clone()];
            for i in 0..100 {
                profiles.push(sampling::random_speed_profile(&mut r, 1 + i % 3, 1 + (i / 3) % 3, 33));
            }
            let mut rec = russell_comparison(&profiles)?;
            rec.seed = cfg.seed;
            Ok(rec)
        }
        "null-control-convergence" => {
            let t = horizon(cfg, system)?;
            let grids = cfg.grids.clone().unwrap_or_else(|| vec![100, 200, 400]);
            let specs = cfg.initial.clone();
            let sys = system.clone();
            let initial = move |g: &Grid| state_from_specs(&sys, g, specs.as_ref(), true);
            null_control_convergence(
                system,
                &initial,
                t,
                &grids,
                cfg.cfl,
                &[1e-4, 1e-6],
                Some(0.8 * topt),
                &hum_options(cfg),
            )
        }
        "augmentation-limit" => {
            let sys = if system.m() > system.k() { system.clone() } else { k1m2_system() };
            augmentation_limit_study(&sys, &[0.1, 0.01, 0.001])
        }
        other => Err(Error::Config(format!(
            "unknown study '{other}'; available: {}",
            STUDY_NAMES.join(", ")
        ))),
    }
}
