//! TOML configuration.
//!
//! ```toml
//! seed = 7
//!
//! [tolerance]
//! unit_gap_eps = 1e-9
//! root_eps = 1e-9
//! quadrature_nodes = 4096
//!
//! [grid]
//! r_min = 10.0
//! r_max = 10000.0
//! points = 4
//! spacing = "geometric"
//! ```
//!
//! Every key is optional.

use std::path::Path;

use diffnev_core::theorems::GridSpec;
use diffnev_core::TolerancePolicy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            r_min: g.r_min,
            r_max: g.r_max,
            points: g.points,
            spacing: Spacing::Geometric,
        }
    }
}

impl GridConfig {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            r_min: self.r_min,
            r_max: self.r_max,
            points: self.points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub tolerance: TolerancePolicy,
    pub grid: GridConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 7,
            tolerance: TolerancePolicy::default(),
            grid: GridConfig::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let c: Config = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.tolerance.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.tolerance.quadrature_nodes < 4 {
            return Err(ConfigError::Invalid("quadrature_nodes must be at least 4".into()));
        }
        self.grid.spec().radii().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
        let c = Config::parse("seed = 3\n[grid]\npoints = 7\n[tolerance]\nquadrature_nodes = 512\n").unwrap();
        assert_eq!((c.seed, c.grid.points, c.tolerance.quadrature_nodes), (3, 7, 512));
        assert_eq!(c.grid.r_min, 10.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Config::parse("[grid]\nr_min = -1.0\n").is_err());
        assert!(Config::parse("[grid]\nspacing = \"linear\"\n").is_err());
        assert!(Config::parse("[tolerance]\nunit_gap_eps = 0.7\n").is_err());
        assert!(Config::parse("colour = 1\n").is_err());
        assert!(Config::parse("[tolerance]\nquadrature_nodes = 2\n").is_err());
    }
}
