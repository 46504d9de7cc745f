//! Run configuration: built-in defaults, then a config file, then the
//! `HITCHINLAB_PRECISION` environment variable, then explicit flags.

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const PRECISION_ENV: &str = "HITCHINLAB_PRECISION";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Exact symbolic checks where available; `false` switches to sampled
    /// floating-point checks.
    pub exact: bool,
    /// Tolerance for floating-point identities.
    pub identity_tol: f64,
    /// Tolerance for drift of conserved quantities along flows.
    pub drift_tol: f64,
    /// Truncation order of formal series.
    pub series_order: usize,
    /// Default integrator step.
    pub step: f64,
    /// Where the JSON report goes; stdout when unset.
    pub out: Option<PathBuf>,
    /// Worker threads; rayon's default when unset.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            exact: true,
            identity_tol: 1e-10,
            drift_tol: 1e-6,
            series_order: 16,
            step: 1e-3,
            out: None,
            threads: None,
        }
    }
}

impl RunConfig {
    /// Reads a TOML or JSON file, chosen by extension. Missing keys keep
    /// their defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        let cfg: RunConfig = match ext.as_deref() {
            Some("toml") => toml::from_str(&text).map_err(|e| invalid(format!("bad TOML config: {e}")))?,
            Some("json") => serde_json::from_str(&text).map_err(|e| invalid(format!("bad JSON config: {e}")))?,
            _ => {
                return Err(Error::Unsupported(format!(
                    "config file {} must end in .toml or .json",
                    path.display()
                )))
            }
        };
        Ok(cfg)
    }

    /// Applies `HITCHINLAB_PRECISION` through `lookup`, which stands in for
    /// `std::env::var` so tests need not touch the process environment.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(v) = lookup(PRECISION_ENV) {
            self.identity_tol = v
                .trim()
                .parse()
                .map_err(|_| invalid(format!("{PRECISION_ENV} is not a number: `{v}`")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("identity_tol", self.identity_tol), ("drift_tol", self.drift_tol), ("step", self.step)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.series_order < 4 {
            return Err(invalid(format!("series_order must be at least 4, got {}", self.series_order)));
        }
        if self.threads == Some(0) {
            return Err(invalid("threads must be at least 1"));
        }
        Ok(())
    }

    /// Defaults, then the optional file, then the environment.
    pub fn load(file: Option<&Path>, lookup: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => Self::from_file(p)?,
            None => RunConfig::default(),
        };
        cfg.apply_env(lookup)?;
        Ok(cfg)
    }
}
