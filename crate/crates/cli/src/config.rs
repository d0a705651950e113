//! Declarative scenario configuration files.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use zenochain::{Boundary, ChainConfig};

use crate::error::CliError;

/// Experiment families the runner knows how to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Single-trajectory polaron formation run.
    Polaron,
    /// Ensemble of Haar-random initial states, averaged.
    Ensemble,
    /// Ensemble of site-1-up ⊗ random initial states.
    PolaronEnsemble,
    /// Distillation of the non-decaying component from a superposition or
    /// mixture, run to convergence.
    Distill,
    /// Non-decaying dimension table over chain sizes and probe positions.
    DimensionScan,
    /// Eigenvalues of the effective Hamiltonian, classified by realness.
    Spectrum,
    /// Survival curves of the lowest chain eigenstates.
    EigenDecay,
    /// Discrete-versus-continuous deviation report.
    Compare,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Polaron => "polaron",
            Scenario::Ensemble => "ensemble",
            Scenario::PolaronEnsemble => "polaron-ensemble",
            Scenario::Distill => "distill",
            Scenario::DimensionScan => "dimension-scan",
            Scenario::Spectrum => "spectrum",
            Scenario::EigenDecay => "eigen-decay",
            Scenario::Compare => "compare",
        }
    }
}

fn default_boundary() -> String {
    "periodic".to_string()
}

fn default_probe_site() -> usize {
    1
}

fn default_seed() -> u64 {
    1
}

/// JSON scenario specification; unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Scenario,
    pub n_spins: usize,
    #[serde(default = "default_boundary")]
    pub boundary: String,
    #[serde(default = "default_probe_site")]
    pub probe_site: usize,
    pub g: f64,
    pub tau: f64,
    #[serde(default)]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disconnect_step: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Size range for `dimension-scan`, e.g. `"3..8"` (inclusive ends);
    /// defaults to `3..n_spins`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_range: Option<String>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let config: FileConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.chain()?.validate().map_err(CliError::from)?;
        match self.scenario {
            Scenario::Ensemble | Scenario::PolaronEnsemble => {
                if self.ensemble_size.is_none_or(|n| n < 1) {
                    return Err(CliError::Config(
                        "ensemble scenarios require ensemble_size >= 1".into(),
                    ));
                }
            }
            Scenario::Polaron | Scenario::Distill if self.initial_state.is_none() => {
                return Err(CliError::Config(format!(
                    "scenario {:?} requires an initial_state",
                    self.scenario.name()
                )));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn boundary(&self) -> Result<Boundary, CliError> {
        Boundary::from_str(&self.boundary).map_err(CliError::from)
    }

    pub fn chain(&self) -> Result<ChainConfig, CliError> {
        Ok(ChainConfig {
            n_spins: self.n_spins,
            boundary: self.boundary()?,
            probe_site: self.probe_site,
            coupling_g: self.g,
            tau: self.tau,
            steps: self.steps,
            disconnect_step: self.disconnect_step,
            seed: self.seed,
        })
    }

    /// Inclusive size range for dimension scans.
    pub fn scan_range(&self) -> Result<Vec<usize>, CliError> {
        let spec = match &self.n_range {
            Some(text) => parse_range(text).ok_or_else(|| {
                CliError::Config(format!("invalid n_range {:?} (expected \"lo..hi\")", text))
            })?,
            None => (3.min(self.n_spins), self.n_spins),
        };
        if spec.0 < 2 || spec.1 < spec.0 {
            return Err(CliError::Config(format!(
                "invalid scan range {}..{}",
                spec.0, spec.1
            )));
        }
        Ok((spec.0..=spec.1).collect())
    }
}

/// Parses `"lo..hi"` with inclusive ends.
pub fn parse_range(text: &str) -> Option<(usize, usize)> {
    let (lo, hi) = text.split_once("..")?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}
