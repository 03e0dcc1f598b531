//! Experiment configuration: the full protocol matrix in one flat struct.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::benchmarks::{make_function, registry};
use crate::error::{Error, Result};
use crate::lio::LioConfig;
use crate::optimizers::pso::PsoConfig;

/// Everything a matrix run needs. Serializes as a flat key-value document
/// (TOML for files), one key per field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub functions: Vec<String>,
    pub dimensions: Vec<usize>,
    pub runs_per_cell: usize,
    pub base_seed: u64,
    pub num_agents: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub early_stop_delta: f64,
    pub early_stop_patience: usize,
    /// Global-phase iterations are `iteration_scale * n`.
    pub iteration_scale: usize,
    pub p_max: f64,
    pub bh_agents: usize,
    pub bh_iterations: usize,
    pub seed_p2: bool,
    pub output_path: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            functions: registry().map(|info| info.name.to_string()).collect(),
            dimensions: vec![10, 25, 50, 100],
            runs_per_cell: 15,
            base_seed: 42,
            num_agents: 100,
            inertia: 0.7,
            cognitive: 1.7,
            social: 1.7,
            early_stop_delta: 1e-5,
            early_stop_patience: 50,
            iteration_scale: PsoConfig::DEFAULT_ITERATION_SCALE,
            p_max: 5.0,
            bh_agents: 20,
            bh_iterations: 50,
            seed_p2: true,
            output_path: PathBuf::from("results.ndjson"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.functions.is_empty() {
            return Err(Error::InvalidConfig("functions list is empty".into()));
        }
        if self.dimensions.is_empty() {
            return Err(Error::InvalidConfig("dimensions list is empty".into()));
        }
        if self.runs_per_cell == 0 {
            return Err(Error::InvalidConfig("runs_per_cell must be >= 1".into()));
        }
        if self.iteration_scale == 0 {
            return Err(Error::InvalidConfig("iteration_scale must be >= 1".into()));
        }
        // Every cell must be instantiable before any work starts.
        for function in &self.functions {
            for &n in &self.dimensions {
                make_function(function, n)?;
            }
        }
        self.pso_config(self.dimensions[0]).validate()?;
        self.lio_config().validate()?;
        Ok(())
    }

    /// Global-phase configuration for an `n`-dimensional cell.
    pub fn pso_config(&self, n: usize) -> PsoConfig {
        PsoConfig {
            num_agents: self.num_agents,
            max_iterations: self.iteration_scale.saturating_mul(n),
            inertia: self.inertia,
            cognitive: self.cognitive,
            social: self.social,
            early_stop_delta: self.early_stop_delta,
            early_stop_patience: self.early_stop_patience,
        }
    }

    pub fn lio_config(&self) -> LioConfig {
        LioConfig {
            p_max: self.p_max,
            bh_agents: self.bh_agents,
            bh_iterations: self.bh_iterations,
            seed_p2: self.seed_p2,
        }
    }

    /// Stable identifier of the full configuration, stamped on records.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }
}
