//! Time integration: CFL step control, the flux-difference update, the
//! implicit stress-relaxation step and boundary conditions.
//!
//! A step is the composition hyperbolic update then relaxation source.
//! The source vanishes on steady states at rest, so the composition
//! inherits the well-balancing of the hyperbolic part.

use crate::diagnostics::{self, StepReport};
use crate::error::SolverError;
use crate::model::{ConsState, Params, DRY_THRESHOLD};
use crate::topography::{topo_solution, TopoFluxPair};

/// 1-D mesh with cell-centered topography.
#[derive(Clone, Debug)]
pub struct Grid {
    edges: Vec<f64>,
    widths: Vec<f64>,
    topo: Vec<f64>,
}

impl Grid {
    /// Uniform mesh of `n` cells over `[x_min, x_max]`, with the bottom
    /// elevation sampled at cell centers.
    pub fn uniform(
        x_min: f64,
        x_max: f64,
        n: usize,
        topo_fn: impl Fn(f64) -> f64,
    ) -> Result<Self, SolverError> {
        if n == 0 || !(x_max > x_min) {
            return Err(SolverError::InvalidGrid(format!(
                "need n > 0 and x_max > x_min, got n = {n}, [{x_min}, {x_max}]"
            )));
        }
        let dx = (x_max - x_min) / n as f64;
        let edges: Vec<f64> = (0..=n).map(|i| x_min + i as f64 * dx).collect();
        Self::from_edges_fn(edges, topo_fn)
    }

    /// Mesh from explicit interface positions.
    pub fn from_edges_fn(
        edges: Vec<f64>,
        topo_fn: impl Fn(f64) -> f64,
    ) -> Result<Self, SolverError> {
        if edges.len() < 2 {
            return Err(SolverError::InvalidGrid("need at least two edges".into()));
        }
        let widths: Vec<f64> = edges.windows(2).map(|w| w[1] - w[0]).collect();
        if widths.iter().any(|&w| !(w > 0.0)) {
            return Err(SolverError::InvalidGrid(
                "edges must be strictly increasing".into(),
            ));
        }
        let topo = (0..widths.len())
            .map(|i| topo_fn(0.5 * (edges[i] + edges[i + 1])))
            .collect();
        Ok(Grid {
            edges,
            widths,
            topo,
        })
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.widths.len()
    }

    #[inline]
    pub fn width(&self, i: usize) -> f64 {
        self.widths[i]
    }

    #[inline]
    pub fn topo(&self, i: usize) -> f64 {
        self.topo[i]
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.edges[0], *self.edges.last().unwrap())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Zero-gradient ghost cells.
    Neumann,
    /// Wrap-around.
    Periodic,
}

/// Cell states plus the current time.
#[derive(Clone, Debug)]
pub struct SimState {
    pub cells: Vec<ConsState>,
    pub time: f64,
}

impl SimState {
    pub fn new(cells: Vec<ConsState>, time: f64) -> Self {
        SimState { cells, time }
    }
}

/// Ghost cell values implied by the boundary condition.
pub fn apply_bc(state: &SimState, bc: BoundaryCondition) -> (ConsState, ConsState) {
    let first = state.cells[0];
    let last = *state.cells.last().expect("empty state");
    match bc {
        BoundaryCondition::Neumann => (first, last),
        BoundaryCondition::Periodic => (last, first),
    }
}

/// Interface flux pair together with the fan's maximal wave speed.
#[derive(Clone, Copy, Debug)]
pub struct InterfaceSolution {
    pub flux: TopoFluxPair,
    pub max_speed: f64,
}

/// Solve all `n + 1` interfaces of the mesh; entry `j` sits between cells
/// `j - 1` and `j`, with ghost cells at the ends.
pub fn solve_interfaces(
    state: &SimState,
    grid: &Grid,
    params: &Params,
    bc: BoundaryCondition,
) -> Result<Vec<InterfaceSolution>, SolverError> {
    let n = grid.n_cells();
    assert_eq!(state.cells.len(), n, "state/grid cell count mismatch");
    let (ghost_l, ghost_r) = apply_bc(state, bc);
    let (ghost_bl, ghost_br) = match bc {
        BoundaryCondition::Neumann => (grid.topo(0), grid.topo(n - 1)),
        BoundaryCondition::Periodic => (grid.topo(n - 1), grid.topo(0)),
    };

    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let (q_l, b_l) = if j == 0 {
            (&ghost_l, ghost_bl)
        } else {
            (&state.cells[j - 1], grid.topo(j - 1))
        };
        let (q_r, b_r) = if j == n {
            (&ghost_r, ghost_br)
        } else {
            (&state.cells[j], grid.topo(j))
        };
        let (flux, max_speed) = topo_solution(q_l, q_r, b_l, b_r, params)?;
        out.push(InterfaceSolution { flux, max_speed });
    }
    Ok(out)
}

/// Reduce the interface speeds to a time step: `dt * A <= cfl * min(dx)`
/// at every interface. Quiescent data falls back to `dt_cap`.
pub(crate) fn dt_from_solutions(
    solutions: &[InterfaceSolution],
    grid: &Grid,
    cfl: f64,
    bc: BoundaryCondition,
    dt_cap: f64,
) -> f64 {
    let n = grid.n_cells();
    let ghost_w = match bc {
        BoundaryCondition::Neumann => (grid.width(0), grid.width(n - 1)),
        BoundaryCondition::Periodic => (grid.width(n - 1), grid.width(0)),
    };
    let mut dt = dt_cap;
    for (j, sol) in solutions.iter().enumerate() {
        if sol.max_speed > 0.0 {
            let w_l = if j == 0 { ghost_w.0 } else { grid.width(j - 1) };
            let w_r = if j == n { ghost_w.1 } else { grid.width(j) };
            dt = dt.min(cfl * w_l.min(w_r) / sol.max_speed);
        }
    }
    dt
}

/// Largest stable time step, capped at `dt_cap`.
pub fn compute_dt(
    state: &SimState,
    grid: &Grid,
    params: &Params,
    cfl: f64,
    bc: BoundaryCondition,
    dt_cap: f64,
) -> Result<f64, SolverError> {
    if !(cfl > 0.0 && cfl <= 0.5) {
        return Err(SolverError::InvalidCfl(cfl));
    }
    let solutions = solve_interfaces(state, grid, params, bc)?;
    Ok(dt_from_solutions(&solutions, grid, cfl, bc, dt_cap))
}

/// Flux-difference update. Tiny depths left behind by roundoff at vacuum
/// fronts snap to the canonical dry cell; a genuinely negative component
/// means the CFL condition was violated and aborts the step.
pub(crate) fn apply_update(
    state: &SimState,
    grid: &Grid,
    solutions: &[InterfaceSolution],
    dt: f64,
) -> Result<Vec<ConsState>, SolverError> {
    let n = grid.n_cells();
    let mut cells = Vec::with_capacity(n);
    for i in 0..n {
        let q = &state.cells[i];
        let nu = dt / grid.width(i);
        let fl = &solutions[i + 1].flux.f_l;
        let fr = &solutions[i].flux.f_r;
        let h = q.h - nu * (fl.h - fr.h);
        let hu = q.hu - nu * (fl.hu - fr.hu);
        let hsxx = q.hsxx - nu * (fl.hsxx - fr.hsxx);
        let hszz = q.hszz - nu * (fl.hszz - fr.hszz);

        let guard = 1e-12 * q.h.max(1.0);
        if h < -guard {
            return Err(SolverError::CflViolation {
                cell: i,
                component: "h",
                value: h,
            });
        }
        if h <= DRY_THRESHOLD {
            cells.push(ConsState::dry());
            continue;
        }
        for (component, value) in [("h*sigma_xx", hsxx), ("h*sigma_zz", hszz)] {
            if value < 0.0 {
                return Err(SolverError::CflViolation {
                    cell: i,
                    component,
                    value,
                });
            }
        }
        cells.push(ConsState { h, hu, hsxx, hszz });
    }
    Ok(cells)
}

/// One hyperbolic (source-free) step of size `dt`.
pub fn hyperbolic_step(
    state: &SimState,
    grid: &Grid,
    params: &Params,
    dt: f64,
    bc: BoundaryCondition,
) -> Result<SimState, SolverError> {
    let solutions = solve_interfaces(state, grid, params, bc)?;
    let cells = apply_update(state, grid, &solutions, dt)?;
    Ok(SimState::new(cells, state.time + dt))
}

/// Exact backward-Euler integration of the stress relaxation: each
/// conformation component moves toward 1 by the factor `1/(1 + dt/lambda)`.
/// Depth and momentum are untouched.
pub fn relax_source_step(state: &SimState, dt: f64, params: &Params) -> SimState {
    if dt == 0.0 {
        return state.clone();
    }
    let factor = 1.0 / (1.0 + dt / params.lambda);
    let cells = state
        .cells
        .iter()
        .map(|q| {
            if q.is_dry(DRY_THRESHOLD) {
                *q
            } else {
                let sxx = q.hsxx / q.h;
                let szz = q.hszz / q.h;
                ConsState {
                    h: q.h,
                    hu: q.hu,
                    hsxx: q.h * (1.0 + (sxx - 1.0) * factor),
                    hszz: q.h * (1.0 + (szz - 1.0) * factor),
                }
            }
        })
        .collect();
    SimState::new(cells, state.time)
}

/// One full step: CFL time step, hyperbolic update, relaxation source.
/// Returns the new state and the step size taken.
pub fn advance(
    state: &SimState,
    grid: &Grid,
    params: &Params,
    cfl: f64,
    bc: BoundaryCondition,
    dt_cap: f64,
) -> Result<(SimState, f64), SolverError> {
    if !(cfl > 0.0 && cfl <= 0.5) {
        return Err(SolverError::InvalidCfl(cfl));
    }
    assert!(dt_cap > 0.0, "dt_cap must be positive, got {dt_cap}");
    let solutions = solve_interfaces(state, grid, params, bc)?;
    let dt = dt_from_solutions(&solutions, grid, cfl, bc, dt_cap);
    let cells = apply_update(state, grid, &solutions, dt)?;
    let mid = SimState::new(cells, state.time);
    let mut new_state = relax_source_step(&mid, dt, params);
    new_state.time = state.time + dt;
    Ok((new_state, dt))
}

/// Result of [`advance_reported`]: the new state plus per-step monitors.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub state: SimState,
    pub dt: f64,
    pub report: StepReport,
}

/// [`advance`] with a full diagnostic record of the step. The energy
/// inequality is checked on the hyperbolic substep alone, where it is a
/// theorem on a level bottom.
pub fn advance_reported(
    state: &SimState,
    grid: &Grid,
    params: &Params,
    cfl: f64,
    bc: BoundaryCondition,
    dt_cap: f64,
) -> Result<StepOutcome, SolverError> {
    if !(cfl > 0.0 && cfl <= 0.5) {
        return Err(SolverError::InvalidCfl(cfl));
    }
    assert!(dt_cap > 0.0, "dt_cap must be positive, got {dt_cap}");
    let solutions = solve_interfaces(state, grid, params, bc)?;
    let dt = dt_from_solutions(&solutions, grid, cfl, bc, dt_cap);
    let cells = apply_update(state, grid, &solutions, dt)?;
    let mid = SimState::new(cells, state.time);
    let energy_violation =
        diagnostics::check_energy_inequality(state, &mid, &solutions, grid, dt, params);
    let mut new_state = relax_source_step(&mid, dt, params);
    new_state.time = state.time + dt;

    let margins = diagnostics::check_domain(&new_state);
    let (max_sxx, min_szz) = diagnostics::principle_extrema(&new_state)
        .unwrap_or((f64::NAN, f64::NAN));
    let report = StepReport {
        t: new_state.time,
        dt,
        mass: diagnostics::total_mass(&new_state, grid),
        energy: diagnostics::total_energy_tilde(&new_state, grid, params),
        max_sxx,
        min_szz,
        energy_violation,
        min_h: margins.min_h,
        min_sigma: margins.min_sxx.min(margins.min_szz),
    };
    Ok(StepOutcome {
        state: new_state,
        dt,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PrimState;

    fn params(g: f64, eta_p: f64, lambda: f64) -> Params {
        Params::new(g, eta_p, lambda).unwrap()
    }

    fn uniform_state(grid: &Grid, p: PrimState) -> SimState {
        SimState::new(vec![p.to_conservative(); grid.n_cells()], 0.0)
    }

    #[test]
    fn grid_construction() {
        let g = Grid::uniform(-4.0, 4.0, 8, |_| 0.0).unwrap();
        assert_eq!(g.n_cells(), 8);
        assert_eq!(g.width(3), 1.0);
        assert_eq!(g.center(0), -3.5);
        assert_eq!(g.domain(), (-4.0, 4.0));

        assert!(Grid::uniform(0.0, 0.0, 4, |_| 0.0).is_err());
        assert!(Grid::from_edges_fn(vec![0.0, 1.0, 0.5], |_| 0.0).is_err());
    }

    #[test]
    fn boundary_ghost_values() {
        let grid = Grid::uniform(0.0, 4.0, 4, |_| 0.0).unwrap();
        let mut state = uniform_state(&grid, PrimState::new(1.0, 0.0, 1.0, 1.0));
        state.cells[0] = ConsState::new(1.0, 2.0, 3.0, 4.0);
        let (gl, gr) = apply_bc(&state, BoundaryCondition::Neumann);
        assert_eq!(gl, state.cells[0]);
        assert_eq!(gr, state.cells[3]);
        let (gl, gr) = apply_bc(&state, BoundaryCondition::Periodic);
        assert_eq!(gl, state.cells[3]);
        assert_eq!(gr, state.cells[0]);
    }

    #[test]
    fn dt_single_active_interface() {
        let grid = Grid::uniform(0.0, 2.0, 2, |_| 0.0).unwrap();
        let zero = InterfaceSolution {
            flux: crate::topography::TopoFluxPair {
                f_l: Default::default(),
                f_r: Default::default(),
                energy_flux: 0.0,
            },
            max_speed: 0.0,
        };
        let mut sols = vec![zero; 3];
        sols[1].max_speed = 2.0;
        let dt = dt_from_solutions(&sols, &grid, 0.5, BoundaryCondition::Neumann, 1e30);
        assert_eq!(dt, 0.25 * grid.width(0));
    }

    #[test]
    fn dt_all_dry_returns_cap() {
        let grid = Grid::uniform(0.0, 1.0, 5, |_| 0.0).unwrap();
        let state = SimState::new(vec![ConsState::dry(); 5], 0.0);
        let pr = params(9.81, 1.0, 1.0);
        let dt = compute_dt(&state, &grid, &pr, 0.5, BoundaryCondition::Neumann, 7.5).unwrap();
        assert_eq!(dt, 7.5);
    }

    #[test]
    fn dt_lake_at_rest_is_finite() {
        let grid = Grid::uniform(0.0, 1.0, 4, |_| 0.0).unwrap();
        let state = uniform_state(&grid, PrimState::new(1.0, 0.0, 1.0, 1.0));
        let pr = params(1.0, 0.0, 1.0);
        let dt = compute_dt(&state, &grid, &pr, 0.5, BoundaryCondition::Neumann, 1e30).unwrap();
        // Speeds are +-a = 1, widths 0.25.
        assert_eq!(dt, 0.125);
    }

    #[test]
    fn dt_rejects_bad_cfl() {
        let grid = Grid::uniform(0.0, 1.0, 4, |_| 0.0).unwrap();
        let state = uniform_state(&grid, PrimState::new(1.0, 0.0, 1.0, 1.0));
        let pr = Params::default();
        for cfl in [0.0, -0.1, 0.6] {
            assert!(matches!(
                compute_dt(&state, &grid, &pr, cfl, BoundaryCondition::Neumann, 1.0),
                Err(SolverError::InvalidCfl(_))
            ));
        }
    }

    #[test]
    fn uniform_state_is_stationary() {
        let grid = Grid::uniform(0.0, 1.0, 10, |_| 0.0).unwrap();
        let state = uniform_state(&grid, PrimState::new(2.0, 1.5, 1.0, 1.0));
        let pr = params(1.0, 1.0, 1.0);
        let (new_state, dt) = advance(
            &state,
            &grid,
            &pr,
            0.5,
            BoundaryCondition::Periodic,
            1e30,
        )
        .unwrap();
        assert!(dt > 0.0);
        for (a, b) in new_state.cells.iter().zip(&state.cells) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn lake_at_rest_is_stationary_over_topography() {
        let topo = |x: f64| if (1.0..2.0).contains(&x) { 0.5 } else { 0.0 };
        let grid = Grid::uniform(0.0, 4.0, 16, topo).unwrap();
        let cells: Vec<ConsState> = (0..16)
            .map(|i| PrimState::new(2.0 - grid.topo(i), 0.0, 1.0, 1.0).to_conservative())
            .collect();
        let state = SimState::new(cells, 0.0);
        let pr = params(9.81, 0.5, 2.0);
        let mut s = state.clone();
        for _ in 0..25 {
            let (next, _) = advance(&s, &grid, &pr, 0.5, BoundaryCondition::Neumann, 1e30).unwrap();
            s = next;
        }
        for (a, b) in s.cells.iter().zip(&state.cells) {
            assert_eq!(a, b, "lake at rest must be preserved bit-for-bit");
        }
    }

    #[test]
    fn relax_source_identity_at_zero_dt() {
        let grid = Grid::uniform(0.0, 1.0, 3, |_| 0.0).unwrap();
        let state = uniform_state(&grid, PrimState::new(1.0, 0.5, 3.0, 0.2));
        let out = relax_source_step(&state, 0.0, &Params::default());
        for (a, b) in out.cells.iter().zip(&state.cells) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn relax_source_backward_euler_value() {
        let grid = Grid::uniform(0.0, 1.0, 1, |_| 0.0).unwrap();
        let state = uniform_state(&grid, PrimState::new(2.0, 0.0, 3.0, 3.0));
        let pr = params(1.0, 1.0, 1.0);
        let out = relax_source_step(&state, 1.0, &pr); // dt/lambda = 1
        let p = out.cells[0].to_primitive(DRY_THRESHOLD).unwrap();
        assert_eq!(p.sxx, 2.0);
        assert_eq!(p.szz, 2.0);
        // h and hu are untouched bit-for-bit.
        assert_eq!(out.cells[0].h, state.cells[0].h);
        assert_eq!(out.cells[0].hu, state.cells[0].hu);
    }

    #[test]
    fn relax_source_limit_is_equilibrium() {
        let grid = Grid::uniform(0.0, 1.0, 1, |_| 0.0).unwrap();
        let state = uniform_state(&grid, PrimState::new(1.0, 0.0, 5.0, 0.1));
        let pr = params(1.0, 1.0, 1.0);
        let out = relax_source_step(&state, 1e12, &pr);
        let p = out.cells[0].to_primitive(DRY_THRESHOLD).unwrap();
        assert!((p.sxx - 1.0).abs() < 1e-10);
        assert!((p.szz - 1.0).abs() < 1e-10);
    }

    #[test]
    fn relax_source_fixed_point_is_exact() {
        let grid = Grid::uniform(0.0, 1.0, 2, |_| 0.0).unwrap();
        let state = uniform_state(&grid, PrimState::new(0.75, 0.25, 1.0, 1.0));
        let out = relax_source_step(&state, 0.37, &Params::default());
        for (a, b) in out.cells.iter().zip(&state.cells) {
            assert_eq!(a, b, "equilibrium must be a bitwise fixed point");
        }
    }

    #[test]
    fn step_conserves_mass_with_neumann_before_waves_reach_boundary() {
        let grid = Grid::uniform(-4.0, 4.0, 100, |_| 0.0).unwrap();
        let cells: Vec<ConsState> = (0..100)
            .map(|i| {
                let f = if grid.center(i) < 0.0 { 3.0 } else { 1.0 };
                ConsState::new(f, 0.0, f, f)
            })
            .collect();
        let state = SimState::new(cells, 0.0);
        let pr = params(9.81, 1.0, 1.0);
        let mass0 = diagnostics::total_mass(&state, &grid);
        let (s1, _) = advance(&state, &grid, &pr, 0.5, BoundaryCondition::Neumann, 1e30).unwrap();
        let mass1 = diagnostics::total_mass(&s1, &grid);
        assert!(
            ((mass1 - mass0) / mass0).abs() < 1e-14,
            "mass drifted: {mass0} -> {mass1}"
        );
    }

    #[test]
    fn advance_reported_produces_finite_report() {
        let grid = Grid::uniform(-4.0, 4.0, 50, |_| 0.0).unwrap();
        let cells: Vec<ConsState> = (0..50)
            .map(|i| {
                let f = if grid.center(i) < 0.0 { 3.0 } else { 1.0 };
                ConsState::new(f, 0.0, f, f)
            })
            .collect();
        let state = SimState::new(cells, 0.0);
        let pr = params(9.81, 1.0, 1.0);
        let out =
            advance_reported(&state, &grid, &pr, 0.5, BoundaryCondition::Neumann, 1e30).unwrap();
        let r = &out.report;
        for v in [r.t, r.dt, r.mass, r.energy, r.max_sxx, r.min_szz, r.min_h] {
            assert!(v.is_finite());
        }
        assert!(r.energy_violation <= 1e-10 * r.energy.abs().max(1.0));
    }
}
