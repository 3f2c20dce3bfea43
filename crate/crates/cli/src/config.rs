//! Optional TOML configuration. Command-line flags override every value here.

use std::path::{Path, PathBuf};

use sasaki_core::catalog::BpFilters;
use sasaki_core::Error;
use serde::Deserialize;

use crate::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub batch: BatchConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchConfig {
    pub max_exponent: Option<u64>,
    pub length: Option<usize>,
    #[serde(flatten)]
    pub filters: BpFilters,
    pub output: Option<PathBuf>,
    pub timestamp: Option<bool>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }
}
