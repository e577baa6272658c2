use std::fs;
use std::path::{Path, PathBuf};

use hopf_noise::{ExpansionPoint, HopfPoint, Sigma2Estimate};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sigma2Entry {
    pub noise: f64,
    pub sigma2: f64,
    pub std_error: f64,
}

impl From<&Sigma2Estimate> for Sigma2Entry {
    fn from(e: &Sigma2Estimate) -> Self {
        Sigma2Entry {
            noise: e.noise,
            sigma2: e.sigma2,
            std_error: e.std_error,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    pub expansion: Option<ExpansionPoint>,
    pub hopf: Option<HopfPoint>,
    pub sigma2: Vec<Sigma2Entry>,
}

/// Provenance record written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub created: String,
    pub master_seed: u64,
    pub config: RunConfig,
    pub derived: Derived,
    /// Files the command writes after the manifest.
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig, derived: Derived, outputs: &[&str]) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            created: chrono::Utc::now().to_rfc3339(),
            master_seed: config.seed,
            config: config.clone(),
            derived,
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(path)
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}
