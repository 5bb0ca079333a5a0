//! Finite-volume solver for one-dimensional shallow viscoelastic flow.
//!
//! The model couples shallow-water dynamics with the diagonal part of an
//! elastic conformation tensor. Cells are updated in the variables
//! `(h, h u, h sxx, h szz)` with a relaxation Riemann solver that keeps
//! depth and conformation nonnegative and dissipates the physical energy;
//! topography enters through hydrostatic reconstruction, stress
//! relaxation through an exact implicit substep.

pub mod diagnostics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod riemann;
pub mod scenarios;
pub mod stepper;
pub mod topography;

pub use error::SolverError;
pub use model::{ConsState, Flux4, Params, PrimState, DRY_THRESHOLD};
pub use scenarios::Scenario;
pub use stepper::{BoundaryCondition, Grid, SimState};
