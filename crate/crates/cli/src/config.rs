//! Analysis configuration: numeric tolerances, the construction ε-sequence,
//! grid resolutions, and the default output format. Loaded from `--config`,
//! then the `PML_CONFIG` environment variable, then built-in defaults.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use crate::files::read_json;
use pml_core::database::DEFAULT_CONSTRUCTION_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub numeric_tolerance: f64,
    pub equivalence_tolerance: f64,
    pub eps_sequence: Vec<f64>,
    pub simplex_grid_resolution: u32,
    pub singling_out_threshold: f64,
    pub format: OutputFormat,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            numeric_tolerance: 1e-9,
            equivalence_tolerance: 1e-4,
            eps_sequence: DEFAULT_CONSTRUCTION_EPS.to_vec(),
            simplex_grid_resolution: 10,
            singling_out_threshold: 0.1,
            format: OutputFormat::Text,
        }
    }
}

impl AnalysisConfig {
    pub fn load(flag: Option<&Path>) -> Result<Self, String> {
        let path: Option<PathBuf> = match flag {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os("PML_CONFIG").map(PathBuf::from),
        };
        let config: AnalysisConfig = match path {
            Some(p) => read_json(&p)?,
            None => AnalysisConfig::default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.numeric_tolerance) || !positive(self.equivalence_tolerance) {
            return Err("tolerances must be positive".into());
        }
        if self.eps_sequence.is_empty() {
            return Err("eps_sequence must be nonempty".into());
        }
        for pair in self.eps_sequence.windows(2) {
            if pair[1] >= pair[0] {
                return Err("eps_sequence must be strictly decreasing".into());
            }
        }
        if self
            .eps_sequence
            .iter()
            .any(|&e| !(e > 0.0 && e < 1.0))
        {
            return Err("eps_sequence values must lie in (0, 1)".into());
        }
        if self.simplex_grid_resolution == 0 {
            return Err("simplex_grid_resolution must be at least 1".into());
        }
        if self.singling_out_threshold.is_nan() || self.singling_out_threshold < 0.0 {
            return Err("singling_out_threshold must be nonnegative".into());
        }
        Ok(())
    }
}
