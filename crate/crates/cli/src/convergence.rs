//! Grid-refinement harness: L1 distances between consecutive resolutions,
//! with the finer solution averaged onto the coarser mesh.

use std::fs;
use std::path::Path;

use svel::model::ConsState;
use thiserror::Error;

use crate::config::Resolved;
use crate::driver::{self, DriverError};

#[derive(Debug, Error)]
pub enum ConvergenceError {
    #[error("cell list must be ascending and each count must divide the next: {0:?}")]
    NonNested(Vec<usize>),
    #[error("need at least two resolutions")]
    TooFew,
    #[error(transparent)]
    Driver(#[from] DriverError),
}

/// L1 distances between one resolution pair, per update variable.
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub coarse: usize,
    pub fine: usize,
    pub l1_h: f64,
    pub l1_hu: f64,
    pub l1_hsxx: f64,
    pub l1_hszz: f64,
}

/// Average a fine solution onto a coarser nested mesh (uniform cells).
fn project(fine: &[ConsState], ratio: usize) -> Vec<ConsState> {
    fine.chunks(ratio)
        .map(|chunk| {
            let n = chunk.len() as f64;
            let mut acc = ConsState::new(0.0, 0.0, 0.0, 0.0);
            for q in chunk {
                acc.h += q.h;
                acc.hu += q.hu;
                acc.hsxx += q.hsxx;
                acc.hszz += q.hszz;
            }
            ConsState::new(acc.h / n, acc.hu / n, acc.hsxx / n, acc.hszz / n)
        })
        .collect()
}

fn l1(a: &[ConsState], b: &[ConsState], dx: f64) -> (f64, f64, f64, f64) {
    let mut d = (0.0, 0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        d.0 += (x.h - y.h).abs() * dx;
        d.1 += (x.hu - y.hu).abs() * dx;
        d.2 += (x.hsxx - y.hsxx).abs() * dx;
        d.3 += (x.hszz - y.hszz).abs() * dx;
    }
    d
}

/// Run the configured scenario at every resolution in `cell_list` and
/// return the distances between consecutive pairs.
pub fn run_convergence(
    resolved: &Resolved,
    cell_list: &[usize],
) -> Result<Vec<ConvergenceRow>, ConvergenceError> {
    if cell_list.len() < 2 {
        return Err(ConvergenceError::TooFew);
    }
    for pair in cell_list.windows(2) {
        if pair[1] <= pair[0] || pair[1] % pair[0] != 0 {
            return Err(ConvergenceError::NonNested(cell_list.to_vec()));
        }
    }

    let mut solutions: Vec<(usize, f64, Vec<ConsState>)> = Vec::new();
    for &cells in cell_list {
        let (grid, state, _) = driver::simulate(resolved, cells, |_| {}, |_, _, _| Ok(()))?;
        solutions.push((cells, grid.width(0), state.cells));
    }

    let mut rows = Vec::new();
    for pair in solutions.windows(2) {
        let (coarse_n, coarse_dx, ref coarse) = pair[0];
        let (fine_n, _, ref fine) = pair[1];
        let projected = project(fine, fine_n / coarse_n);
        let (l1_h, l1_hu, l1_hsxx, l1_hszz) = l1(coarse, &projected, coarse_dx);
        rows.push(ConvergenceRow {
            coarse: coarse_n,
            fine: fine_n,
            l1_h,
            l1_hu,
            l1_hsxx,
            l1_hszz,
        });
    }
    Ok(rows)
}

pub fn write_table(path: &Path, rows: &[ConvergenceRow]) -> std::io::Result<()> {
    let mut out = String::from("coarse,fine,l1_h,l1_hu,l1_hsxx,l1_hszz\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.coarse, r.fine, r.l1_h, r.l1_hu, r.l1_hsxx, r.l1_hszz
        ));
    }
    fs::write(path, out)
}
