use std::path::Path;

use serde::{Deserialize, Serialize};

/// Name of the environment variable holding the default config path.
pub const CONFIG_ENV: &str = "MAHLER_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Plain,
}

/// Settings shared by every subcommand. Missing keys in a config file take
/// the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Target error of `jensen1d` measures.
    pub measure_tol: f64,
    pub max_panels: usize,
    pub quad2d_grid: usize,
    /// φ nodes for sheet tracking.
    pub path_grid: usize,
    pub digits: u32,
    pub max_coeff: i64,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            measure_tol: 1e-12,
            max_panels: 20_000,
            quad2d_grid: 512,
            path_grid: mahler::paths::DEFAULT_GRID,
            digits: 15,
            max_coeff: 50,
            format: Format::Json,
            seed: 0x6d61686c,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.measure_tol > 0.0) {
            return Err(format!("measure_tol must be positive, got {}", self.measure_tol));
        }
        if self.max_panels == 0 || self.quad2d_grid < 8 || self.path_grid < 64 {
            return Err("max_panels must be positive, quad2d_grid at least 8, path_grid at least 64".into());
        }
        if !(5..=16).contains(&self.digits) {
            return Err(format!("digits must lie in 5..=16, got {}", self.digits));
        }
        if self.max_coeff < 1 {
            return Err(format!("max_coeff must be positive, got {}", self.max_coeff));
        }
        Ok(())
    }

    pub fn quad(&self) -> mahler::measure::QuadConfig {
        mahler::measure::QuadConfig {
            tol: self.measure_tol,
            max_panels: self.max_panels,
            ..Default::default()
        }
    }
}
