//! Run configuration loaded from TOML.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use s2o_core::fitting::FitConfig;
use s2o_core::safety::GridSpec;
use s2o_core::trajectory::resample_uniform;
use s2o_core::{Case, Params};

/// Environment variable consulted when `--config` is absent.
pub const CONFIG_ENV: &str = "S2O_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Field constants, vehicle and comfort parameters, ROI and speed-limit
    /// overrides.
    pub eval: Params,
    /// Resample every case onto this period (s) before scoring.
    pub resample_dt: Option<f64>,
    /// Model file used when `--model` is absent.
    pub model: Option<PathBuf>,
    /// Seed for corpus generation.
    pub seed: u64,
    pub fit: FitConfig,
    pub heatmap: GridSpec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eval: Params::default(),
            resample_dt: None,
            model: None,
            seed: 2024,
            fit: FitConfig::default(),
            heatmap: GridSpec::default(),
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        self.eval.validate()?;
        self.fit.validate()?;
        if let Some(dt) = self.resample_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                bail!("resample_dt must be positive, got {dt}");
            }
        }
        let h = &self.heatmap;
        if !(h.cell > 0.0 && h.cell.is_finite()) || h.rows == 0 || h.cols == 0 {
            bail!("heatmap needs a positive cell size and at least one row and column");
        }
        if let Some(limits) = &self.eval.speed_limits {
            let all = [limits.urban_regular, limits.urban_intersection, limits.highway_slow, limits.highway_express];
            if all.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                bail!("speed limits must be positive");
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("config {}", path.display()))
    }

    /// `explicit`, then `$S2O_CONFIG`, then defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::load(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn prepare(&self, case: Case) -> Case {
        match self.resample_dt {
            Some(dt) => resample_uniform(&case, dt),
            None => case,
        }
    }
}
