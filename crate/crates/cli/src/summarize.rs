//! Aggregation of manifests from previous runs.

use std::path::{Path, PathBuf};

use zenochain::subspace;

use crate::error::CliError;
use crate::output::{self, RunManifest};

/// Loads manifests from the given directories, verifies output
/// checksums, checks that all runs share one chain configuration, and
/// aggregates their survival results against the analytic prediction.
pub fn summarize(dirs: &[PathBuf], out: Option<&Path>) -> Result<String, CliError> {
    if dirs.is_empty() {
        return Err(CliError::Config(
            "summarize needs at least one run directory".into(),
        ));
    }
    let mut manifests = Vec::with_capacity(dirs.len());
    for dir in dirs {
        let manifest = RunManifest::load(dir)?;
        manifest.verify_outputs(dir)?;
        manifests.push((dir.clone(), manifest));
    }

    let reference = &manifests[0].1.scenario;
    for (dir, manifest) in &manifests[1..] {
        let other = &manifest.scenario;
        let same = other.n_spins == reference.n_spins
            && other.boundary == reference.boundary
            && other.probe_site == reference.probe_site
            && other.g == reference.g
            && other.tau == reference.tau;
        if !same {
            return Err(CliError::Config(format!(
                "incompatible runs: {} differs from {} in chain parameters",
                dir.display(),
                manifests[0].0.display()
            )));
        }
    }

    let chain = reference.chain()?;
    let analytic = subspace::build_nondecaying_basis(&chain)
        .map(|report| report.nd_dimension as f64 / chain.chain_dim() as f64)
        .ok();

    let mut rows = Vec::new();
    let mut survivals = Vec::new();
    for (dir, manifest) in &manifests {
        let survival = ["mean_final_survival", "survival", "survival_at_stop"]
            .iter()
            .find_map(|key| manifest.results.get(*key).and_then(|v| v.as_f64()));
        if let Some(p) = survival {
            survivals.push(p);
        }
        rows.push(format!(
            "{},{},{},{}",
            dir.display(),
            manifest.scenario.scenario.name(),
            manifest.seed,
            survival.map(output::fmt_float).unwrap_or_default()
        ));
    }

    let mut lines = Vec::new();
    lines.push(format!(
        "{} run(s), chain N={} {} probe={} g={} tau={}",
        manifests.len(),
        reference.n_spins,
        reference.boundary,
        reference.probe_site,
        reference.g,
        reference.tau
    ));
    if !survivals.is_empty() {
        let mean = survivals.iter().sum::<f64>() / survivals.len() as f64;
        let variance = survivals
            .iter()
            .map(|p| (p - mean) * (p - mean))
            .sum::<f64>()
            / survivals.len() as f64;
        let stderr = if survivals.len() > 1 {
            (variance / (survivals.len() - 1) as f64).sqrt()
        } else {
            0.0
        };
        lines.push(format!(
            "survival: mean {} (stderr {}) over {} value(s)",
            output::fmt_float(mean),
            output::fmt_float(stderr),
            survivals.len()
        ));
        if let Some(analytic) = analytic {
            lines.push(format!(
                "analytic random-state average: {} (deviation {})",
                output::fmt_float(analytic),
                output::fmt_float(mean - analytic)
            ));
        }
    } else {
        lines.push("no survival-type results to aggregate".into());
    }

    if let Some(out_dir) = out {
        std::fs::create_dir_all(out_dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
        output::write_csv(
            out_dir,
            "summary.csv",
            "run_dir,scenario,seed,survival",
            &rows,
        )?;
        lines.push(format!("wrote {}", out_dir.join("summary.csv").display()));
    }

    Ok(lines.join("\n"))
}
