use std::io::Write;

use super::grid::Grid;
use super::primal::Trajectory;
use super::state::{ControlSignal, StateField};
use crate::error::Result;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Long format: `t,x,component,value`, components numbered from 1.
pub fn write_trajectory_csv<W: Write>(out: W, trajectory: &Trajectory, grid: &Grid) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "x", "component", "value"])?;
    for (t, state) in trajectory.times.iter().zip(&trajectory.states) {
        for (i, row) in state.rows().into_iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                w.write_record([fmt(*t), fmt(grid.node(j)), (i + 1).to_string(), fmt(*v)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Wide format: `x,w1,...,wn`.
pub fn write_state_csv<W: Write>(out: W, state: &StateField) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x".to_string()];
    header.extend((1..=state.n()).map(|i| format!("w{i}")));
    w.write_record(&header)?;
    let nx = state.nx();
    for j in 0..=nx {
        let mut rec = vec![fmt(j as f64 / nx as f64)];
        rec.extend((0..state.n()).map(|i| fmt(state.values()[[i, j]])));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Wide format: `t,u1,...,um`.
pub fn write_control_csv<W: Write>(out: W, control: &ControlSignal) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=control.m()).map(|p| format!("u{p}")));
    w.write_record(&header)?;
    for n in 0..=control.steps() {
        let mut rec = vec![fmt(control.time(n))];
        rec.extend((0..control.m()).map(|p| fmt(control.values()[[p, n]])));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
