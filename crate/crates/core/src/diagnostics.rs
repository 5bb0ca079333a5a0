//! Run-time monitors: conserved totals, the discrete energy inequality,
//! invariant-domain margins and the transported-variable extrema.

use crate::model::{Params, DRY_THRESHOLD};
use crate::stepper::{Grid, InterfaceSolution, SimState};

/// Per-step monitor row.
#[derive(Clone, Copy, Debug)]
pub struct StepReport {
    pub t: f64,
    pub dt: f64,
    /// Total water volume `sum h dx`.
    pub mass: f64,
    /// Total energy including the topographic contribution.
    pub energy: f64,
    /// Maximum of `sxx^-1/2 / h` over wet cells (NaN if none).
    pub max_sxx: f64,
    /// Minimum of `szz^1/2 / h` over wet cells (NaN if none).
    pub min_szz: f64,
    /// Worst cell-wise excess of the discrete energy inequality on the
    /// hyperbolic substep; nonpositive means no violation.
    pub energy_violation: f64,
    pub min_h: f64,
    pub min_sigma: f64,
}

/// Compensated sum; keeps conservation audits at round-off accuracy.
fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Total water volume `sum h_i dx_i`.
pub fn total_mass(state: &SimState, grid: &Grid) -> f64 {
    kahan_sum(
        state
            .cells
            .iter()
            .enumerate()
            .map(|(i, q)| q.h * grid.width(i)),
    )
}

/// Total energy `sum (E + g h b) dx`.
pub fn total_energy_tilde(state: &SimState, grid: &Grid, params: &Params) -> f64 {
    kahan_sum(state.cells.iter().enumerate().map(|(i, q)| {
        let p = q.primitive_or_dry(DRY_THRESHOLD);
        let (_, e_tilde) = p.total_energy(grid.topo(i), params);
        e_tilde * grid.width(i)
    }))
}

/// Worst cell-wise left-hand side of the discrete energy inequality
/// `E(q^{n+1}) - E(q^n) + dt/dx (G_{i+1/2} - G_{i-1/2}) <= 0`
/// for the hyperbolic substep; a positive return is a violation.
///
/// On a level bottom this is a theorem for the scheme; with topography the
/// value is informational only (the inequality holds semi-discretely).
pub fn check_energy_inequality(
    pre: &SimState,
    post: &SimState,
    solutions: &[InterfaceSolution],
    grid: &Grid,
    dt: f64,
    params: &Params,
) -> f64 {
    let n = grid.n_cells();
    assert_eq!(solutions.len(), n + 1);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let b = grid.topo(i);
        let e_pre = pre.cells[i]
            .primitive_or_dry(DRY_THRESHOLD)
            .total_energy(b, params)
            .1;
        let e_post = post.cells[i]
            .primitive_or_dry(DRY_THRESHOLD)
            .total_energy(b, params)
            .1;
        let flux_div = solutions[i + 1].flux.energy_flux - solutions[i].flux.energy_flux;
        let lhs = e_post - e_pre + dt / grid.width(i) * flux_div;
        worst = worst.max(lhs);
    }
    worst
}

/// Invariant-domain margins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainMargins {
    pub min_h: f64,
    pub min_sxx: f64,
    pub min_szz: f64,
}

/// Minimum depth and conformation components over the mesh; dry cells read
/// back as `(0, 1, 1)`.
pub fn check_domain(state: &SimState) -> DomainMargins {
    let mut m = DomainMargins {
        min_h: f64::INFINITY,
        min_sxx: f64::INFINITY,
        min_szz: f64::INFINITY,
    };
    for q in &state.cells {
        let p = q.primitive_or_dry(DRY_THRESHOLD);
        m.min_h = m.min_h.min(p.h);
        m.min_sxx = m.min_sxx.min(p.sxx);
        m.min_szz = m.min_szz.min(p.szz);
    }
    m
}

/// `(max s_xx, min s_zz)` over wet cells; `None` if the domain is dry.
pub fn principle_extrema(state: &SimState) -> Option<(f64, f64)> {
    let mut max_sxx = f64::NEG_INFINITY;
    let mut min_szz = f64::INFINITY;
    let mut any = false;
    for q in &state.cells {
        if q.is_dry(DRY_THRESHOLD) {
            continue;
        }
        let p = q.primitive_or_dry(DRY_THRESHOLD);
        let s = p.s_vars().expect("wet cell");
        max_sxx = max_sxx.max(s.s_xx);
        min_szz = min_szz.min(s.s_zz);
        any = true;
    }
    any.then_some((max_sxx, min_szz))
}

/// Distance from a steady state at rest: the worst cell's
/// `|u| + |h + b - median(h + b)| + |sigma - I|`, over wet cells.
/// Zero exactly at rest.
pub fn steady_residual(state: &SimState, grid: &Grid) -> f64 {
    let mut surfaces: Vec<f64> = state
        .cells
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_dry(DRY_THRESHOLD))
        .map(|(i, q)| q.h + grid.topo(i))
        .collect();
    if surfaces.is_empty() {
        return 0.0;
    }
    surfaces.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = surfaces[surfaces.len() / 2];

    let mut worst: f64 = 0.0;
    for (i, q) in state.cells.iter().enumerate() {
        if q.is_dry(DRY_THRESHOLD) {
            continue;
        }
        let p = q.primitive_or_dry(DRY_THRESHOLD);
        let r = p.u.abs()
            + (p.h + grid.topo(i) - median).abs()
            + (p.sxx - 1.0).abs()
            + (p.szz - 1.0).abs();
        worst = worst.max(r);
    }
    worst
}
