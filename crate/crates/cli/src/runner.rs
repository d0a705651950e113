//! Scenario dispatch: each experiment family maps onto library calls and
//! emits plot-ready tables plus a reproducibility manifest.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use zenochain::model::{self, ChainConfig};
use zenochain::numerics::{self, ComplexVector};
use zenochain::protocol::{self, ProtocolEngine, Trajectory};
use zenochain::subspace;

use crate::config::{FileConfig, Scenario};
use crate::error::CliError;
use crate::output::{self, trajectory_header, trajectory_rows, OutputRecord, RunManifest};
use crate::state_spec::{self, InitialState};

/// Runs one scenario, writing outputs and the manifest into `dir`.
pub fn run_scenario(config: &FileConfig, dir: &Path) -> Result<RunManifest, CliError> {
    config.validate()?;
    let started = Instant::now();
    let chain = config.chain()?;

    let (outputs, results) = match config.scenario {
        Scenario::Polaron => run_polaron(config, &chain, dir)?,
        Scenario::Ensemble => run_ensemble(config, &chain, dir, StateFamily::Haar)?,
        Scenario::PolaronEnsemble => run_ensemble(config, &chain, dir, StateFamily::SiteOneUp)?,
        Scenario::Distill => run_distill(config, &chain, dir)?,
        Scenario::DimensionScan => run_dimension_scan(config, &chain, dir)?,
        Scenario::Spectrum => run_spectrum(&chain, dir)?,
        Scenario::EigenDecay => run_eigen_decay(&chain, dir)?,
        Scenario::Compare => run_compare(config, &chain, dir)?,
    };

    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: config.clone(),
        seed: config.seed,
        duration_ms: started.elapsed().as_millis(),
        outputs,
        results,
    };
    manifest.store(dir)?;
    Ok(manifest)
}

fn require_pure(state: InitialState, scenario: &str) -> Result<ComplexVector, CliError> {
    match state {
        InitialState::Pure(v) => Ok(v),
        InitialState::Mixed(_) => Err(CliError::Config(format!(
            "scenario {scenario} requires a pure initial state"
        ))),
    }
}

fn run_polaron(
    config: &FileConfig,
    chain: &ChainConfig,
    dir: &Path,
) -> Result<(Vec<OutputRecord>, Map<String, Value>), CliError> {
    let spec = config.initial_state.as_deref().expect("validated");
    let psi0 = require_pure(state_spec::parse_initial_state(spec, chain)?, "polaron")?;
    let trajectory = protocol::run_measurement_protocol(chain, &psi0)?;
    let report = subspace::build_nondecaying_basis(chain)?;

    let csv = output::write_csv(
        dir,
        "trajectory.csv",
        &trajectory_header(chain.n_spins),
        &trajectory_rows(&trajectory),
    )?;

    let mut results = Map::new();
    results.insert("survival".into(), json!(trajectory.survival()));
    results.insert(
        "predicted_survival".into(),
        json!(subspace::predicted_survival(&psi0, &report)),
    );
    results.insert(
        "final_magnetization".into(),
        json!(trajectory.magnetizations.last().expect("nonempty")),
    );
    Ok((vec![csv], results))
}

enum StateFamily {
    Haar,
    SiteOneUp,
}

impl StateFamily {
    fn draw(&self, chain: &ChainConfig, index: usize) -> ComplexVector {
        let seed = numerics::derive_stream_seed(chain.seed, index as u64);
        match self {
            StateFamily::Haar => numerics::random_state(chain.chain_dim(), seed),
            StateFamily::SiteOneUp => state_spec::random_polaron_state(chain, seed),
        }
    }
}

fn run_ensemble(
    config: &FileConfig,
    chain: &ChainConfig,
    dir: &Path,
    family: StateFamily,
) -> Result<(Vec<OutputRecord>, Map<String, Value>), CliError> {
    let size = config.ensemble_size.expect("validated");
    let engine = ProtocolEngine::new(chain)?;
    let report = subspace::build_nondecaying_basis(chain)?;

    // Members evolve in parallel; aggregation below runs in index order,
    // so output bytes do not depend on scheduling.
    let members: Vec<Result<(ComplexVector, Trajectory), CliError>> = (0..size)
        .into_par_iter()
        .map(|index| {
            let psi0 = family.draw(chain, index);
            let trajectory = engine.run(&psi0).map_err(CliError::from)?;
            Ok((psi0, trajectory))
        })
        .collect();

    let rows = chain.steps + 1;
    let mut mean_survival = vec![0.0f64; rows];
    let mut mean_magnetization = vec![vec![0.0f64; chain.n_spins]; rows];
    let mut member_rows = Vec::with_capacity(size);
    let mut final_survivals = Vec::with_capacity(size);
    for (index, member) in members.into_iter().enumerate() {
        let (psi0, trajectory) = member?;
        for k in 0..rows {
            mean_survival[k] += trajectory.cumulative_survival[k] / size as f64;
            for (mean, z) in mean_magnetization[k]
                .iter_mut()
                .zip(&trajectory.magnetizations[k])
            {
                *mean += z / size as f64;
            }
        }
        let predicted = subspace::predicted_survival(&psi0, &report);
        let survival = trajectory.survival();
        final_survivals.push(survival);
        member_rows.push(format!(
            "{index},{},{},{}",
            numerics::derive_stream_seed(chain.seed, index as u64),
            output::fmt_float(survival),
            output::fmt_float(predicted)
        ));
    }

    let mut mean_rows = Vec::with_capacity(rows);
    for k in 0..rows {
        let mut row = format!(
            "{},{}",
            output::fmt_float(k as f64 * chain.tau),
            output::fmt_float(mean_survival[k])
        );
        for mean in &mean_magnetization[k] {
            row.push(',');
            row.push_str(&output::fmt_float(*mean));
        }
        mean_rows.push(row);
    }
    let mut mean_header = String::from("time,mean_survival");
    for site in 1..=chain.n_spins {
        mean_header.push_str(&format!(",mean_z{site}"));
    }

    let mean_csv = output::write_csv(dir, "ensemble_mean.csv", &mean_header, &mean_rows)?;
    let members_csv = output::write_csv(
        dir,
        "members.csv",
        "index,seed,survival,predicted_survival",
        &member_rows,
    )?;

    let mean_final = final_survivals.iter().sum::<f64>() / size as f64;
    let variance = final_survivals
        .iter()
        .map(|p| (p - mean_final) * (p - mean_final))
        .sum::<f64>()
        / size as f64;
    let stderr = (variance / size as f64).sqrt();

    let mut results = Map::new();
    results.insert("ensemble_size".into(), json!(size));
    results.insert("mean_final_survival".into(), json!(mean_final));
    results.insert("stderr_final_survival".into(), json!(stderr));
    results.insert(
        "analytic_average_survival".into(),
        json!(report.nd_dimension as f64 / chain.chain_dim() as f64),
    );
    results.insert("nd_dimension".into(), json!(report.nd_dimension));
    Ok((vec![mean_csv, members_csv], results))
}

fn run_distill(
    config: &FileConfig,
    chain: &ChainConfig,
    dir: &Path,
) -> Result<(Vec<OutputRecord>, Map<String, Value>), CliError> {
    let spec = config.initial_state.as_deref().expect("validated");
    let all_up = model::all_up_state(chain.n_spins);
    let report = subspace::build_nondecaying_basis(chain)?;
    let mut results = Map::new();
    let mut outputs = Vec::new();

    match state_spec::parse_initial_state(spec, chain)? {
        InitialState::Pure(psi0) => {
            let cap = if chain.steps > 0 {
                chain.steps
            } else {
                100_000
            };
            let (trajectory, info) = protocol::run_until_converged(chain, &psi0, cap)?;
            outputs.push(output::write_csv(
                dir,
                "trajectory.csv",
                &trajectory_header(chain.n_spins),
                &trajectory_rows(&trajectory),
            )?);
            results.insert("survival_at_stop".into(), json!(info.survival_at_stop));
            results.insert("converged".into(), json!(info.converged));
            results.insert("steps_run".into(), json!(info.steps_run));
            results.insert(
                "predicted_survival".into(),
                json!(subspace::predicted_survival(&psi0, &report)),
            );
            results.insert(
                "fidelity_with_all_up".into(),
                json!(trajectory.final_state.fidelity(&all_up)),
            );
        }
        InitialState::Mixed(rho0) => {
            let (final_state, survival) = protocol::run_mixed_protocol(chain, &rho0)?;
            let component_rows: Vec<String> = rho0
                .components
                .iter()
                .zip(final_state.components.iter())
                .enumerate()
                .map(|(index, ((w_in, _), (w_out, state)))| {
                    format!(
                        "{index},{},{},{}",
                        output::fmt_float(*w_in),
                        output::fmt_float(*w_out),
                        output::fmt_float(state.fidelity(&all_up))
                    )
                })
                .collect();
            outputs.push(output::write_csv(
                dir,
                "components.csv",
                "index,weight_in,weight_out,fidelity_with_all_up",
                &component_rows,
            )?);
            let (dominant_weight, dominant_state) = final_state.dominant();
            results.insert("survival".into(), json!(survival));
            results.insert("dominant_weight".into(), json!(dominant_weight));
            results.insert(
                "dominant_fidelity_with_all_up".into(),
                json!(dominant_state.fidelity(&all_up)),
            );
        }
    }
    Ok((outputs, results))
}

fn run_dimension_scan(
    config: &FileConfig,
    chain: &ChainConfig,
    dir: &Path,
) -> Result<(Vec<OutputRecord>, Map<String, Value>), CliError> {
    let sizes = config.scan_range()?;
    let boundary = config.boundary()?;
    let positions: Vec<usize> = match boundary {
        // Rings are site-symmetric; open chains are scanned across sites.
        zenochain::Boundary::Periodic => vec![chain.probe_site],
        zenochain::Boundary::Open => (1..=*sizes.iter().max().expect("nonempty")).collect(),
    };
    let table = subspace::nondecaying_dimension_scan(&sizes, boundary, &positions)?;

    let rows: Vec<String> = table
        .iter()
        .map(|entry| {
            let formula = match entry.boundary {
                zenochain::Boundary::Periodic => {
                    subspace::periodic_dimension_formula(entry.n_spins)
                        .map(|d| d.to_string())
                        .unwrap_or_default()
                }
                zenochain::Boundary::Open => String::new(),
            };
            format!(
                "{},{},{},{},{}",
                entry.n_spins, entry.boundary, entry.probe_site, entry.dimension, formula
            )
        })
        .collect();
    let csv = output::write_csv(
        dir,
        "dimensions.csv",
        "n_spins,boundary,probe_site,dimension,formula",
        &rows,
    )?;
    let json_table: Vec<Value> = table
        .iter()
        .map(|entry| {
            json!({
                "n_spins": entry.n_spins,
                "boundary": entry.boundary.to_string(),
                "probe_site": entry.probe_site,
                "dimension": entry.dimension,
            })
        })
        .collect();
    let json_out = output::write_json(dir, "dimensions.json", &json_table)?;

    let mut results = Map::new();
    results.insert("entries".into(), json!(table.len()));
    Ok((vec![csv, json_out], results))
}

fn run_spectrum(
    chain: &ChainConfig,
    dir: &Path,
) -> Result<(Vec<OutputRecord>, Map<String, Value>), CliError> {
    let classification = subspace::classify_spectrum(chain)?;
    let report = subspace::build_nondecaying_basis(chain)?;
    let real: std::collections::HashSet<usize> =
        classification.real_indices.iter().copied().collect();
    let rows: Vec<String> = classification
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(index, lambda)| {
            let class = if real.contains(&index) {
                "real"
            } else {
                "decaying"
            };
            format!(
                "{index},{},{},{class}",
                output::fmt_float(lambda.re),
                output::fmt_float(lambda.im)
            )
        })
        .collect();
    let csv = output::write_csv(dir, "spectrum.csv", "index,re,im,class", &rows)?;

    let mut results = Map::new();
    results.insert("real_count".into(), json!(classification.real_count()));
    results.insert("nd_dimension".into(), json!(report.nd_dimension));
    results.insert(
        "realness_tolerance".into(),
        json!(classification.realness_tolerance),
    );
    results.insert("field_strength".into(), json!(chain.field_strength()));
    Ok((vec![csv], results))
}

fn run_eigen_decay(
    chain: &ChainConfig,
    dir: &Path,
) -> Result<(Vec<OutputRecord>, Map<String, Value>), CliError> {
    const TRACKED: usize = 4;
    let eigen = state_spec::chain_eigensystem(chain)?;
    let engine = ProtocolEngine::new(chain)?;
    let trajectories: Vec<Trajectory> = (0..TRACKED)
        .map(|l| engine.run(&eigen.eigenvectors[l]).map_err(CliError::from))
        .collect::<Result<_, _>>()?;

    let rows: Vec<String> = (0..=chain.steps)
        .map(|k| {
            let mut row = output::fmt_float(k as f64 * chain.tau);
            for trajectory in &trajectories {
                row.push(',');
                row.push_str(&output::fmt_float(trajectory.cumulative_survival[k]));
            }
            row
        })
        .collect();
    let mut header = String::from("time");
    for l in 0..TRACKED {
        header.push_str(&format!(",survival_{l}"));
    }
    let csv = output::write_csv(dir, "eigen_decay.csv", &header, &rows)?;

    let mut results = Map::new();
    results.insert(
        "final_survivals".into(),
        json!(trajectories
            .iter()
            .map(Trajectory::survival)
            .collect::<Vec<_>>()),
    );
    Ok((vec![csv], results))
}

fn run_compare(
    config: &FileConfig,
    chain: &ChainConfig,
    dir: &Path,
) -> Result<(Vec<OutputRecord>, Map<String, Value>), CliError> {
    let spec = config
        .initial_state
        .as_deref()
        .ok_or_else(|| CliError::Config("compare requires an initial_state".into()))?;
    let psi0 = require_pure(state_spec::parse_initial_state(spec, chain)?, "compare")?;
    let report = protocol::compare_discrete_continuous(chain, &psi0)?;

    let body = json!({
        "tau": chain.tau,
        "steps": chain.steps,
        "max_infidelity": report.max_infidelity,
        "max_survival_gap": report.max_survival_gap,
        "max_magnetization_gap": report.max_magnetization_gap,
    });
    let json_out = output::write_json(dir, "compare.json", &body)?;

    let mut results = Map::new();
    results.insert("max_infidelity".into(), json!(report.max_infidelity));
    results.insert("max_survival_gap".into(), json!(report.max_survival_gap));
    results.insert(
        "max_magnetization_gap".into(),
        json!(report.max_magnetization_gap),
    );
    Ok((vec![json_out], results))
}
