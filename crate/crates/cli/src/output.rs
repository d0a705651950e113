//! Plot-ready CSV tables, JSON reports, and the reproducibility manifest.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! repeated run with the same configuration and seed produces
//! byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use zenochain::Trajectory;

use crate::config::FileConfig;
use crate::error::CliError;

/// Checksum record of one emitted file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    /// Data rows (header excluded) for CSV files; 1 for JSON reports.
    pub rows: usize,
}

/// Full reproducibility record of one run.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub scenario: FileConfig,
    pub seed: u64,
    pub duration_ms: u128,
    pub outputs: Vec<OutputRecord>,
    /// Scenario-level scalar results.
    pub results: serde_json::Map<String, serde_json::Value>,
}

pub const MANIFEST_FILE: &str = "run_manifest.json";

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid manifest {}: {e}", path.display())))
    }

    pub fn store(&self, dir: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("manifest serialization failed: {e}")))?;
        fs::write(dir.join(MANIFEST_FILE), text + "\n")?;
        Ok(())
    }

    /// Recomputes the checksum of every listed output file.
    pub fn verify_outputs(&self, dir: &Path) -> Result<(), CliError> {
        for record in &self.outputs {
            let path = dir.join(&record.file);
            let bytes = fs::read(&path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            let digest = sha256_hex(&bytes);
            if digest != record.sha256 {
                return Err(CliError::Io(format!(
                    "checksum mismatch for {} (expected {}, found {digest})",
                    path.display(),
                    record.sha256
                )));
            }
        }
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Shortest round-trip decimal representation.
pub fn fmt_float(value: f64) -> String {
    format!("{value}")
}

/// Writes a CSV file and returns its checksum record.
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: &[String],
) -> Result<OutputRecord, CliError> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(dir.join(name), &text)?;
    Ok(OutputRecord {
        file: name.to_string(),
        sha256: sha256_hex(text.as_bytes()),
        rows: rows.len(),
    })
}

/// Writes a pretty JSON report and returns its checksum record.
pub fn write_json<T: Serialize>(
    dir: &Path,
    name: &str,
    value: &T,
) -> Result<OutputRecord, CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serialization of {name} failed: {e}")))?
        + "\n";
    fs::write(dir.join(name), &text)?;
    Ok(OutputRecord {
        file: name.to_string(),
        sha256: sha256_hex(text.as_bytes()),
        rows: 1,
    })
}

/// Header for a trajectory table over `n_spins` sites.
pub fn trajectory_header(n_spins: usize) -> String {
    let mut header = String::from("time,step_probability,cumulative_survival");
    for site in 1..=n_spins {
        header.push_str(&format!(",z{site}"));
    }
    header.push_str(",marker");
    header
}

/// One row per recorded step: time, step probability, cumulative
/// survival, per-site magnetization, and an in-band marker column
/// carrying labeled events such as the probe disconnect.
pub fn trajectory_rows(trajectory: &Trajectory) -> Vec<String> {
    let mut rows = Vec::with_capacity(trajectory.len());
    for k in 0..trajectory.len() {
        let time = trajectory.times[k];
        let mut row = format!(
            "{},{},{}",
            fmt_float(time),
            fmt_float(trajectory.step_probabilities[k]),
            fmt_float(trajectory.cumulative_survival[k])
        );
        for z in &trajectory.magnetizations[k] {
            row.push(',');
            row.push_str(&fmt_float(*z));
        }
        let marker = trajectory
            .phase_markers
            .iter()
            .find(|(t, _)| (t - time).abs() < 1e-12)
            .map(|(_, label)| label.as_str())
            .unwrap_or("");
        row.push(',');
        row.push_str(marker);
        rows.push(row);
    }
    rows
}

/// Resolves the output directory: CLI override, then config, then a
/// scenario-named default under the current directory.
pub fn resolve_output_dir(
    config: &FileConfig,
    cli_override: Option<&Path>,
) -> Result<PathBuf, CliError> {
    let dir = cli_override
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(format!("zenochain-{}", config.scenario.name())));
    fs::create_dir_all(&dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}
