//! Run configuration: plain `key=value` files, flag overrides using the
//! same keys, and resolution against scenario defaults.

use std::path::PathBuf;

use svel::model::Params;
use svel::scenarios::Scenario;
use svel::stepper::BoundaryCondition;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("malformed value for '{key}': '{value}' ({reason})")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("{key} out of range: {reason}")]
    OutOfRange { key: String, reason: String },
    #[error("malformed line '{0}': expected key=value")]
    BadLine(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioChoice {
    Test(u32),
    Custom,
}

/// Raw configuration with optional overrides; `None` defers to the
/// scenario defaults.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub scenario: ScenarioChoice,
    pub cells: Option<usize>,
    pub cfl: f64,
    pub g: Option<f64>,
    pub eta_p: Option<f64>,
    pub lambda: Option<f64>,
    pub t_final: Option<f64>,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub bc: Option<BoundaryCondition>,
    pub dt_floor: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: ScenarioChoice::Test(1),
            cells: None,
            cfl: 0.5,
            g: None,
            eta_p: None,
            lambda: None,
            t_final: None,
            snapshot_times: Vec::new(),
            output_dir: PathBuf::from("out"),
            bc: None,
            dt_floor: 1e-12,
        }
    }
}

fn parse_num(key: &str, value: &str) -> Result<f64, ConfigError> {
    value.trim().parse::<f64>().map_err(|e| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl RunConfig {
    /// Apply one `key = value` assignment. Flags reuse this with the same
    /// key names, so file and command line validate identically.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "scenario" => {
                self.scenario = if v == "custom" {
                    ScenarioChoice::Custom
                } else {
                    let n = v.parse::<u32>().map_err(|e| ConfigError::BadValue {
                        key: key.into(),
                        value: v.into(),
                        reason: e.to_string(),
                    })?;
                    if !(1..=4).contains(&n) {
                        return Err(ConfigError::OutOfRange {
                            key: key.into(),
                            reason: format!("{n} is not in 1..=4 (or 'custom')"),
                        });
                    }
                    ScenarioChoice::Test(n)
                };
            }
            "cells" => {
                let n = v.parse::<usize>().map_err(|e| ConfigError::BadValue {
                    key: key.into(),
                    value: v.into(),
                    reason: e.to_string(),
                })?;
                if n < 4 {
                    return Err(ConfigError::OutOfRange {
                        key: key.into(),
                        reason: format!("cells = {n} must be >= 4"),
                    });
                }
                self.cells = Some(n);
            }
            "cfl" => {
                let c = parse_num(key, v)?;
                if !(c > 0.0 && c <= 0.5) {
                    return Err(ConfigError::OutOfRange {
                        key: key.into(),
                        reason: format!("cfl = {c} must lie in (0, 0.5]"),
                    });
                }
                self.cfl = c;
            }
            "g" => {
                let g = parse_num(key, v)?;
                if g <= 0.0 {
                    return Err(ConfigError::OutOfRange {
                        key: key.into(),
                        reason: format!("g = {g} must be > 0"),
                    });
                }
                self.g = Some(g);
            }
            "eta_p" => {
                let e = parse_num(key, v)?;
                if e < 0.0 {
                    return Err(ConfigError::OutOfRange {
                        key: key.into(),
                        reason: format!("eta_p = {e} must be >= 0"),
                    });
                }
                self.eta_p = Some(e);
            }
            "lambda" => {
                let l = parse_num(key, v)?;
                if l <= 0.0 {
                    return Err(ConfigError::OutOfRange {
                        key: key.into(),
                        reason: format!("lambda = {l} must be > 0"),
                    });
                }
                self.lambda = Some(l);
            }
            "t_final" => {
                let t = parse_num(key, v)?;
                if !(t > 0.0) {
                    return Err(ConfigError::OutOfRange {
                        key: key.into(),
                        reason: format!("t_final = {t} must be > 0"),
                    });
                }
                self.t_final = Some(t);
            }
            "snapshot_times" => {
                let mut times = Vec::new();
                for part in v.split(',').filter(|p| !p.trim().is_empty()) {
                    times.push(parse_num(key, part)?);
                }
                self.snapshot_times = times;
            }
            "output_dir" => self.output_dir = PathBuf::from(v),
            "bc" => {
                self.bc = Some(match v {
                    "neumann" => BoundaryCondition::Neumann,
                    "periodic" => BoundaryCondition::Periodic,
                    other => {
                        return Err(ConfigError::BadValue {
                            key: key.into(),
                            value: other.into(),
                            reason: "expected 'neumann' or 'periodic'".into(),
                        })
                    }
                });
            }
            "dt_floor" => {
                let f = parse_num(key, v)?;
                if f < 0.0 {
                    return Err(ConfigError::OutOfRange {
                        key: key.into(),
                        reason: format!("dt_floor = {f} must be >= 0"),
                    });
                }
                self.dt_floor = f;
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }
}

/// Parse a `key=value` configuration file body; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::BadLine(raw.to_string()))?;
        config.apply(key.trim(), value)?;
    }
    Ok(config)
}

/// Fully resolved configuration: scenario defaults merged with overrides
/// and validated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub params: Params,
    pub cells: usize,
    pub cfl: f64,
    pub t_final: f64,
    /// Ascending snapshot times; always ends at `t_final`.
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub bc: BoundaryCondition,
    pub dt_floor: f64,
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let scenario = match self.scenario {
            ScenarioChoice::Test(n) => Scenario::test_case(n).expect("validated scenario number"),
            ScenarioChoice::Custom => Scenario::custom_uniform(),
        };
        let d = scenario.default_params;
        let params = Params::new(
            self.g.unwrap_or(d.g),
            self.eta_p.unwrap_or(d.eta_p),
            self.lambda.unwrap_or(d.lambda),
        )
        .map_err(|e| ConfigError::OutOfRange {
            key: "params".into(),
            reason: e.to_string(),
        })?;
        let t_final = self.t_final.unwrap_or(scenario.t_final);

        let mut snapshot_times = self.snapshot_times.clone();
        for (i, &t) in snapshot_times.iter().enumerate() {
            if !(0.0..=t_final).contains(&t) {
                return Err(ConfigError::OutOfRange {
                    key: "snapshot_times".into(),
                    reason: format!("time {t} outside [0, {t_final}]"),
                });
            }
            if i > 0 && t < snapshot_times[i - 1] {
                return Err(ConfigError::OutOfRange {
                    key: "snapshot_times".into(),
                    reason: "times must be ascending".into(),
                });
            }
        }
        if snapshot_times.last() != Some(&t_final) {
            snapshot_times.push(t_final);
        }

        Ok(Resolved {
            cells: self.cells.unwrap_or(scenario.default_cells),
            bc: self.bc.unwrap_or(scenario.bc),
            scenario,
            params,
            cfl: self.cfl,
            t_final,
            snapshot_times,
            output_dir: self.output_dir.clone(),
            dt_floor: self.dt_floor,
        })
    }
}
