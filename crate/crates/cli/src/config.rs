//! JSON config file mirroring the command-line flags.

use oscihomog_core::error::{Error, Result};
use serde::Deserialize;
use std::path::Path;

/// Every flag has a config twin; explicit flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub domain: Option<String>,
    pub g: Option<String>,
    pub g_file: Option<String>,
    pub eps: Option<f64>,
    pub eps_grid: Option<String>,
    pub band: Option<f64>,
    pub p: Option<String>,
    pub n_points: Option<usize>,
    pub points: Option<String>,
    pub backend: Option<String>,
    pub case: Option<String>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub rho: Option<f64>,
    pub out: Option<String>,
    pub out_dir: Option<String>,
    pub points_per_wavelength: Option<f64>,
    pub node_cap: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput {
            field: "config",
            reason: format!("{}: {e}", path.display()),
        })
    }
}
