//! Built-in benchmark scenarios: initial data, topography, parameters and
//! final times.
//!
//! 1. Dam break on a wet floor (Riemann data, level bottom).
//! 2. Dam break on a dry floor (vacuum on the right).
//! 3. Double rarefaction over two topography steps, with near-vacuum at
//!    the velocity singularity.
//! 4. Solitary wave runup on a sloping beach.

use crate::error::SolverError;
use crate::model::{ConsState, Params};
use crate::stepper::{BoundaryCondition, Grid, SimState};

/// Unit step with `H(0) = 1`, so jumps aligned with cell edges sample
/// deterministically.
pub fn heaviside(x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        1.0
    }
}

/// Amplitude of the solitary wave in scenario 4.
pub const SOLITARY_AMPLITUDE: f64 = 0.19;

/// Solitary wave profile `alpha sech^2(sqrt(0.75 alpha) (x - x0))` with
/// the wave centered at `x0 = acosh(sqrt(1/0.05)) / (0.75 alpha)`.
pub fn synolakis_profile(x: f64, alpha: f64) -> f64 {
    let x0 = (1.0_f64 / 0.05).sqrt().acosh() / (0.75 * alpha);
    let c = ((0.75 * alpha).sqrt() * (x - x0)).cosh();
    alpha / (c * c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    DamBreakWet,
    DamBreakDry,
    DoubleRarefaction,
    SolitaryRunup,
    UniformLake,
}

/// A benchmark configuration: domain, topography, initial data and
/// defaults for the driver.
#[derive(Clone, Debug)]
pub struct Scenario {
    kind: Kind,
    pub domain: (f64, f64),
    pub t_final: f64,
    pub default_params: Params,
    pub default_cells: usize,
    pub bc: BoundaryCondition,
}

impl Scenario {
    /// The four built-in test cases.
    pub fn test_case(n: u32) -> Result<Scenario, SolverError> {
        let scenario = match n {
            1 => Scenario {
                kind: Kind::DamBreakWet,
                domain: (-4.0, 4.0),
                t_final: 0.2,
                default_params: Params::new(9.81, 1.0, 1.0).unwrap(),
                default_cells: 400,
                bc: BoundaryCondition::Neumann,
            },
            2 => Scenario {
                kind: Kind::DamBreakDry,
                domain: (-4.0, 4.0),
                t_final: 0.5,
                default_params: Params::new(9.81, 1.0, 1.0).unwrap(),
                default_cells: 400,
                bc: BoundaryCondition::Neumann,
            },
            3 => Scenario {
                kind: Kind::DoubleRarefaction,
                domain: (0.0, 25.0),
                t_final: 0.25,
                default_params: Params::new(9.81, 1e-4, 1.0).unwrap(),
                default_cells: 400,
                bc: BoundaryCondition::Neumann,
            },
            4 => Scenario {
                kind: Kind::SolitaryRunup,
                domain: (0.0, 100.0),
                t_final: 32.5,
                default_params: Params::new(9.81, 1e-4, 1.0).unwrap(),
                default_cells: 400,
                bc: BoundaryCondition::Neumann,
            },
            other => return Err(SolverError::UnknownTestCase(other)),
        };
        Ok(scenario)
    }

    /// Quiet unit-depth pool; the blank starting point for custom runs.
    pub fn custom_uniform() -> Scenario {
        Scenario {
            kind: Kind::UniformLake,
            domain: (0.0, 1.0),
            t_final: 1.0,
            default_params: Params::default(),
            default_cells: 400,
            bc: BoundaryCondition::Neumann,
        }
    }

    /// Bottom elevation.
    pub fn topo(&self, x: f64) -> f64 {
        match self.kind {
            Kind::DamBreakWet | Kind::DamBreakDry | Kind::UniformLake => 0.0,
            Kind::DoubleRarefaction => heaviside(x - 25.0 / 3.0) - heaviside(x - 25.0 / 2.0),
            Kind::SolitaryRunup => ((x - 40.0) / 19.85).max(0.0),
        }
    }

    /// Initial cell state at position `x`.
    pub fn initial_state(&self, x: f64, params: &Params) -> ConsState {
        match self.kind {
            Kind::DamBreakWet => {
                let f = 3.0 - 2.0 * heaviside(x);
                ConsState::new(f, 0.0, f, f)
            }
            Kind::DamBreakDry => {
                let f = 3.0 - 3.0 * heaviside(x);
                ConsState::new(f, 0.0, f, f)
            }
            Kind::DoubleRarefaction => {
                let h = (10.0 - self.topo(x)).max(0.0);
                let hu = -350.0 + 700.0 * heaviside(x - 50.0 / 3.0);
                ConsState::new(h, hu, h, h)
            }
            Kind::SolitaryRunup => {
                let h0 = synolakis_profile(x, SOLITARY_AMPLITUDE);
                let h = (1.0 + h0 - self.topo(x)).max(0.0);
                ConsState::new(h, h * (params.g.sqrt() * h0), h, h)
            }
            Kind::UniformLake => ConsState::new(1.0, 0.0, 1.0, 1.0),
        }
    }

    /// Mesh plus initial state, sampled pointwise at cell centers.
    pub fn build(&self, cells: usize, params: &Params) -> Result<(Grid, SimState), SolverError> {
        let grid = Grid::uniform(self.domain.0, self.domain.1, cells, |x| self.topo(x))?;
        let states = (0..cells)
            .map(|i| self.initial_state(grid.center(i), params))
            .collect();
        Ok((grid, SimState::new(states, 0.0)))
    }
}
