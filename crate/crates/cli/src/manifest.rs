//! Metadata written next to every simulation run.

use std::path::Path;

use effdof_core::montecarlo::{SimConfig, BLOCK_SIZE, RNG_DESCRIPTION};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::render::Rendering;

pub const WEIGHT_POLICY: &str =
    "random weights are redrawn while <= 0; rejections are counted per cell";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    Flag,
    Entropy,
    Manifest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub preset: Option<String>,
    pub config: SimConfig,
    pub seed_source: SeedSource,
    pub rendering: Rendering,
    pub rng: String,
    pub block_size: u64,
    pub weight_policy: String,
    pub weight_rejections: u64,
    pub threads: usize,
    pub duration_secs: f64,
}

impl RunManifest {
    pub fn new(
        preset: Option<String>,
        config: SimConfig,
        seed_source: SeedSource,
        rendering: Rendering,
    ) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            preset,
            config,
            seed_source,
            rendering,
            rng: RNG_DESCRIPTION.to_string(),
            block_size: BLOCK_SIZE,
            weight_policy: WEIGHT_POLICY.to_string(),
            weight_rejections: 0,
            threads: 0,
            duration_secs: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::parse(e.line() as u64, e.column(), e.to_string()))
    }
}
