//! Error type shared by the solver modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("state has a negative {component} component: {value}")]
    NegativeComponent { component: &'static str, value: f64 },

    #[error("non-finite input in {0}")]
    NonFinite(&'static str),

    #[error("dry state has no transported variables")]
    DryState,

    #[error("degenerate Riemann fan: intermediate depth {0} is not positive")]
    DegenerateFan(f64),

    #[error("CFL violation: cell {cell} left the invariant domain ({component} = {value})")]
    CflViolation {
        cell: usize,
        component: &'static str,
        value: f64,
    },

    #[error("time step {dt} fell below the configured floor {floor}")]
    DtUnderflow { dt: f64, floor: f64 },

    #[error("invalid CFL factor {0}: must lie in (0, 0.5]")]
    InvalidCfl(f64),

    #[error("unknown test case {0}: expected 1..=4")]
    UnknownTestCase(u32),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
