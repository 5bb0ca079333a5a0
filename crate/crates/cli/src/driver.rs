//! Simulation driver: advances a resolved configuration to each snapshot
//! time and writes the snapshot and step-report CSV files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use svel::diagnostics::StepReport;
use svel::model::{Params, DRY_THRESHOLD};
use svel::stepper::{advance_reported, Grid, SimState};
use svel::SolverError;
use thiserror::Error;

use crate::config::Resolved;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("solver error: {0}")]
    Solver(#[from] SolverError),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Outcome of a completed run.
#[derive(Debug)]
pub struct RunReport {
    pub steps: usize,
    pub final_time: f64,
    pub snapshots: Vec<PathBuf>,
    pub min_h: f64,
    pub min_sigma: f64,
    /// True when every step stayed inside the invariant domain.
    pub domain_ok: bool,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DriverError + '_ {
    move |source| DriverError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// All floating-point output is printed with 17 significant digits, which
/// round-trips f64 exactly and keeps files byte-deterministic.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Advance through the snapshot times, invoking `on_step` after every
/// step and `on_snapshot` each time a target is reached exactly.
///
/// The final partial step is clipped to land on the target; a clipped
/// step is never an underflow, only a CFL-limited collapse below
/// `dt_floor` is.
pub fn simulate(
    resolved: &Resolved,
    cells: usize,
    mut on_step: impl FnMut(&StepReport),
    mut on_snapshot: impl FnMut(usize, &Grid, &SimState) -> Result<(), DriverError>,
) -> Result<(Grid, SimState, usize), DriverError> {
    let (grid, mut state) = resolved.scenario.build(cells, &resolved.params)?;
    let mut steps = 0;
    for (snap_idx, &target) in resolved.snapshot_times.iter().enumerate() {
        while target - state.time > 1e-12 * target.max(1.0) {
            let remaining = target - state.time;
            let out = advance_reported(
                &state,
                &grid,
                &resolved.params,
                resolved.cfl,
                resolved.bc,
                remaining,
            )?;
            if out.dt < resolved.dt_floor && out.dt < remaining {
                return Err(SolverError::DtUnderflow {
                    dt: out.dt,
                    floor: resolved.dt_floor,
                }
                .into());
            }
            state = out.state;
            steps += 1;
            on_step(&out.report);
        }
        state.time = target;
        on_snapshot(snap_idx, &grid, &state)?;
    }
    Ok((grid, state, steps))
}

pub fn write_snapshot(
    path: &Path,
    grid: &Grid,
    state: &SimState,
    params: &Params,
) -> Result<(), DriverError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut out = String::from("x,b,h,u,sigma_xx,sigma_zz,tau_xx,tau_zz\n");
    for (i, q) in state.cells.iter().enumerate() {
        let p = q
            .to_primitive(DRY_THRESHOLD)
            .expect("cell state left the invariant domain");
        let (tau_xx, tau_zz) = p.extra_stress(params);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(grid.center(i)),
            fmt(grid.topo(i)),
            fmt(p.h),
            fmt(p.u),
            fmt(p.sxx),
            fmt(p.szz),
            fmt(tau_xx),
            fmt(tau_zz),
        ));
    }
    w.write_all(out.as_bytes()).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn write_step_reports(path: &Path, reports: &[StepReport]) -> Result<(), DriverError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut out = String::from("t,dt,mass,energy,max_sxx,min_szz,energy_violation,min_h\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(r.t),
            fmt(r.dt),
            fmt(r.mass),
            fmt(r.energy),
            fmt(r.max_sxx),
            fmt(r.min_szz),
            fmt(r.energy_violation),
            fmt(r.min_h),
        ));
    }
    w.write_all(out.as_bytes()).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

/// Run a resolved configuration, writing `snapshot_NN.csv` at each
/// snapshot time plus `steps.csv`, and return a summary report.
///
/// On abort (time-step underflow, CFL violation) the step reports
/// gathered so far are flushed before the error is returned.
pub fn run(resolved: &Resolved) -> Result<RunReport, DriverError> {
    fs::create_dir_all(&resolved.output_dir).map_err(io_err(&resolved.output_dir))?;
    let steps_path = resolved.output_dir.join("steps.csv");

    let mut reports: Vec<StepReport> = Vec::new();
    let mut snapshots: Vec<PathBuf> = Vec::new();
    let mut min_h = f64::INFINITY;
    let mut min_sigma = f64::INFINITY;

    let result = simulate(
        resolved,
        resolved.cells,
        |r| {
            min_h = min_h.min(r.min_h);
            min_sigma = min_sigma.min(r.min_sigma);
            reports.push(*r);
        },
        |snap_idx, grid, state| {
            let path = resolved
                .output_dir
                .join(format!("snapshot_{snap_idx:02}.csv"));
            write_snapshot(&path, grid, state, &resolved.params)?;
            snapshots.push(path);
            Ok(())
        },
    );

    match result {
        Ok((_, state, steps)) => {
            write_step_reports(&steps_path, &reports)?;
            let domain_ok = min_h >= 0.0 && min_sigma >= 0.0;
            Ok(RunReport {
                steps,
                final_time: state.time,
                snapshots,
                min_h: if min_h.is_finite() { min_h } else { 0.0 },
                min_sigma: if min_sigma.is_finite() { min_sigma } else { 1.0 },
                domain_ok,
            })
        }
        Err(e) => {
            // Keep the partial record for post-mortem inspection.
            let _ = write_step_reports(&steps_path, &reports);
            Err(e)
        }
    }
}
