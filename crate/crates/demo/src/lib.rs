//! Browser bindings: an interactive simulation handle, a single-interface
//! Riemann-fan inspector and a viscosity sweep of the dam-break front.
//!
//! Compile with `wasm-pack build --target web`; the static page in `www/`
//! drives these exports. The crate also builds natively so the bindings
//! stay under ordinary `cargo test`.

use wasm_bindgen::prelude::*;

use svel::diagnostics::total_mass;
use svel::model::{ConsState, Params, DRY_THRESHOLD};
use svel::riemann::solve_fan;
use svel::scenarios::Scenario;
use svel::stepper::{advance, Grid, SimState};

fn build_params(scenario: &Scenario, g: f64, eta_p: f64, lambda: f64) -> Result<Params, JsError> {
    let d = scenario.default_params;
    let g = if g > 0.0 { g } else { d.g };
    Params::new(g, eta_p, lambda).map_err(JsError::from)
}

/// One running simulation of a built-in scenario.
#[wasm_bindgen]
pub struct Simulation {
    scenario: Scenario,
    params: Params,
    grid: Grid,
    state: SimState,
    cells: usize,
}

impl Simulation {
    fn try_new(
        scenario: u32,
        cells: u32,
        g: f64,
        eta_p: f64,
        lambda: f64,
    ) -> Result<Simulation, svel::SolverError> {
        let scenario = Scenario::test_case(scenario)?;
        let d = scenario.default_params;
        let g = if g > 0.0 { g } else { d.g };
        let params = Params::new(g, eta_p, lambda)?;
        let cells = (cells as usize).max(4);
        let (grid, state) = scenario.build(cells, &params)?;
        Ok(Simulation {
            scenario,
            params,
            grid,
            state,
            cells,
        })
    }
}

#[wasm_bindgen]
impl Simulation {
    /// `scenario` is 1..=4; pass `g <= 0` to use the scenario default.
    #[wasm_bindgen(constructor)]
    pub fn new(
        scenario: u32,
        cells: u32,
        g: f64,
        eta_p: f64,
        lambda: f64,
    ) -> Result<Simulation, JsError> {
        Self::try_new(scenario, cells, g, eta_p, lambda).map_err(JsError::from)
    }

    /// Advance by (at most) `duration` of simulation time; returns the new
    /// time. Stepping stops at the scenario's final time.
    pub fn advance_by(&mut self, duration: f64) -> Result<f64, JsError> {
        let target = (self.state.time + duration).min(self.scenario.t_final);
        let mut guard = 0;
        while target - self.state.time > 1e-12 && guard < 100_000 {
            let (next, _) = advance(
                &self.state,
                &self.grid,
                &self.params,
                0.5,
                self.scenario.bc,
                target - self.state.time,
            )
            .map_err(JsError::from)?;
            self.state = next;
            guard += 1;
        }
        Ok(self.state.time)
    }

    pub fn reset(&mut self) -> Result<(), JsError> {
        let (grid, state) = self
            .scenario
            .build(self.cells, &self.params)
            .map_err(JsError::from)?;
        self.grid = grid;
        self.state = state;
        Ok(())
    }

    pub fn time(&self) -> f64 {
        self.state.time
    }

    pub fn t_final(&self) -> f64 {
        self.scenario.t_final
    }

    pub fn mass(&self) -> f64 {
        total_mass(&self.state, &self.grid)
    }

    pub fn x(&self) -> Vec<f64> {
        (0..self.grid.n_cells()).map(|i| self.grid.center(i)).collect()
    }

    pub fn bottom(&self) -> Vec<f64> {
        (0..self.grid.n_cells()).map(|i| self.grid.topo(i)).collect()
    }

    pub fn depth(&self) -> Vec<f64> {
        self.state.cells.iter().map(|q| q.h).collect()
    }

    /// Free surface `h + b`.
    pub fn surface(&self) -> Vec<f64> {
        self.state
            .cells
            .iter()
            .enumerate()
            .map(|(i, q)| q.h + self.grid.topo(i))
            .collect()
    }

    pub fn velocity(&self) -> Vec<f64> {
        self.state
            .cells
            .iter()
            .map(|q| q.to_primitive(DRY_THRESHOLD).expect("valid state").u)
            .collect()
    }

    pub fn sigma_xx(&self) -> Vec<f64> {
        self.state
            .cells
            .iter()
            .map(|q| q.to_primitive(DRY_THRESHOLD).expect("valid state").sxx)
            .collect()
    }

    pub fn sigma_zz(&self) -> Vec<f64> {
        self.state
            .cells
            .iter()
            .map(|q| q.to_primitive(DRY_THRESHOLD).expect("valid state").szz)
            .collect()
    }
}

/// Solve one interface Riemann problem and flatten the fan:
/// `[sigma1, sigma2, sigma3, c_l, c_r, pi_star,
///   (h, u, sxx, szz) x {left, left-star, right-star, right}]`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn solve_interface(
    h_l: f64,
    u_l: f64,
    sxx_l: f64,
    szz_l: f64,
    h_r: f64,
    u_r: f64,
    sxx_r: f64,
    szz_r: f64,
    g: f64,
    eta_p: f64,
    lambda: f64,
) -> Result<Vec<f64>, JsError> {
    let params = Params::new(g, eta_p, lambda).map_err(JsError::from)?;
    let q_l = ConsState::new(h_l, h_l * u_l, h_l * sxx_l, h_l * szz_l);
    let q_r = ConsState::new(h_r, h_r * u_r, h_r * sxx_r, h_r * szz_r);
    let fan = solve_fan(&q_l, &q_r, &params).map_err(JsError::from)?;

    let mut out = vec![
        fan.sigma1,
        fan.sigma2,
        fan.sigma3,
        fan.c.c_l,
        fan.c.c_r,
        fan.pi_lstar,
    ];
    for p in [fan.state_l, fan.state_lstar, fan.state_rstar, fan.state_r] {
        out.extend_from_slice(&[p.h, p.u, p.sxx, p.szz]);
    }
    Ok(out)
}

/// Dam-break front position at the final time for each viscosity value:
/// the right-most cell whose depth deviates from the undisturbed right
/// state by more than `threshold`.
#[wasm_bindgen]
pub fn front_positions(
    scenario: u32,
    cells: u32,
    lambda: f64,
    eta_p_values: Vec<f64>,
    threshold: f64,
) -> Result<Vec<f64>, JsError> {
    let scenario = Scenario::test_case(scenario).map_err(JsError::from)?;
    let mut out = Vec::with_capacity(eta_p_values.len());
    for &eta_p in &eta_p_values {
        let params = build_params(&scenario, 0.0, eta_p, lambda)?;
        let (grid, mut state) = scenario
            .build((cells as usize).max(4), &params)
            .map_err(JsError::from)?;
        while scenario.t_final - state.time > 1e-12 {
            let (next, _) = advance(
                &state,
                &grid,
                &params,
                0.5,
                scenario.bc,
                scenario.t_final - state.time,
            )
            .map_err(JsError::from)?;
            state = next;
        }
        let n = grid.n_cells();
        let h_ref = scenario.initial_state(grid.center(n - 1), &params).h;
        let front = (0..n)
            .rev()
            .find(|&i| (state.cells[i].h - h_ref).abs() > threshold)
            .map_or(grid.domain().0, |i| grid.center(i));
        out.push(front);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulation_steps_and_conserves_mass_early() {
        let mut sim = Simulation::new(1, 200, 0.0, 1.0, 1.0).unwrap();
        let m0 = sim.mass();
        let t = sim.advance_by(0.05).unwrap();
        assert!(t > 0.0);
        assert_eq!(sim.x().len(), 200);
        assert_eq!(sim.depth().len(), 200);
        assert!(((sim.mass() - m0) / m0).abs() < 1e-12);
        for v in sim.velocity() {
            assert!(v.is_finite());
        }
    }

    #[test]
    fn simulation_stops_at_final_time() {
        let mut sim = Simulation::new(1, 50, 0.0, 1.0, 1.0).unwrap();
        let t = sim.advance_by(10.0).unwrap();
        assert!((t - sim.t_final()).abs() < 1e-9);
        sim.reset().unwrap();
        assert_eq!(sim.time(), 0.0);
    }

    #[test]
    fn interface_fan_is_ordered() {
        let out =
            solve_interface(3.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 9.81, 1.0, 1.0).unwrap();
        assert_eq!(out.len(), 6 + 16);
        assert!(out[0] <= out[1] && out[1] <= out[2]);
        // Star depths positive.
        assert!(out[6 + 4] > 0.0 && out[6 + 8] > 0.0);
    }

    #[test]
    fn front_positions_increase_with_viscosity() {
        let fronts = front_positions(1, 100, 1.0, vec![0.1, 10.0, 1000.0], 1e-3).unwrap();
        assert_eq!(fronts.len(), 3);
        assert!(fronts[0] < fronts[1] && fronts[1] < fronts[2], "{fronts:?}");
    }

    #[test]
    fn rejects_unknown_scenario() {
        assert!(Simulation::try_new(9, 100, 0.0, 1.0, 1.0).is_err());
        assert!(Simulation::try_new(1, 100, 0.0, -1.0, 1.0).is_err());
    }
}
