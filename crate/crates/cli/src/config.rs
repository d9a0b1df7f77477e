//! Scenario configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::scenarios::SCENARIOS;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl FromStr for Units {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nats" => Ok(Units::Nats),
            "bits" => Ok(Units::Bits),
            other => Err(CliError::InvalidConfig(format!("unknown units `{other}`"))),
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub units: Units,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

impl ScenarioConfig {
    /// Config with the scenario's default dimension and trial count.
    pub fn new(name: &str) -> Result<Self> {
        let spec = SCENARIOS
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CliError::UnknownScenario(name.to_string()))?;
        Ok(Self {
            name: name.to_string(),
            dim: spec.default_dim,
            trials: spec.default_trials,
            seed: 0,
            tol: DEFAULT_TOL,
            units: Units::Nats,
            params: BTreeMap::new(),
        })
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !SCENARIOS.iter().any(|s| s.name == self.name) {
            return Err(CliError::UnknownScenario(self.name.clone()));
        }
        if self.trials < 1 {
            return Err(CliError::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.dim < 1 {
            return Err(CliError::InvalidConfig("dim must be at least 1".into()));
        }
        Ok(())
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.params.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| CliError::InvalidConfig(format!("cannot parse parameter {key}={raw}"))),
        }
    }

    pub fn param_f64(&self, key: &str, default: f64) -> Result<f64> {
        self.parsed(key, default)
    }

    pub fn param_usize(&self, key: &str, default: usize) -> Result<usize> {
        self.parsed(key, default)
    }

    pub fn param_bool(&self, key: &str, default: bool) -> Result<bool> {
        self.parsed(key, default)
    }

    pub fn param_str<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.params.get(key).map_or(default, String::as_str)
    }
}

/// Parses `key=value`.
pub fn parse_param(raw: &str) -> Result<(String, String)> {
    match raw.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(CliError::InvalidConfig(format!("expected key=value, got `{raw}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let cfg = ScenarioConfig::new("bound-chain").unwrap();
        assert_eq!(cfg.tol, DEFAULT_TOL);
        assert_eq!(cfg.units, Units::Nats);
        cfg.validate().unwrap();
        assert!(matches!(ScenarioConfig::new("nope"), Err(CliError::UnknownScenario(_))));
        assert!(cfg.clone().with_trials(0).validate().is_err());
        assert!(cfg.clone().with_tol(0.0).validate().is_err());
        assert!(cfg.with_tol(f64::NAN).validate().is_err());
    }

    #[test]
    fn params() {
        let cfg = ScenarioConfig::new("bound-chain").unwrap().with_param("x", 0.5).with_param("n", "3");
        assert_eq!(cfg.param_f64("x", 1.0).unwrap(), 0.5);
        assert_eq!(cfg.param_usize("n", 1).unwrap(), 3);
        assert_eq!(cfg.param_usize("missing", 7).unwrap(), 7);
        assert!(cfg.param_usize("x", 1).is_err());
        assert_eq!(parse_param("a=b=c").unwrap(), ("a".into(), "b=c".into()));
        assert!(parse_param("=1").is_err());
        assert!(parse_param("novalue").is_err());
    }

    #[test]
    fn units_parse() {
        assert_eq!("bits".parse::<Units>().unwrap(), Units::Bits);
        assert!("bytes".parse::<Units>().is_err());
        assert_eq!(serde_json::to_string(&Units::Nats).unwrap(), "\"nats\"");
    }
}
