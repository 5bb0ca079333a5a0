//! Configuration, simulation driver and the convergence/trend harnesses
//! behind the `svel` command-line tool.

pub mod config;
pub mod convergence;
pub mod driver;
pub mod trend;
