//! Initial-state grammar.
//!
//! ```text
//! product:<u|d>{N}          computational product state
//! random                    Haar-random chain state (config seed)
//! random-polaron            site-1 up ⊗ Haar-random rest
//! eigen:<index>             chain eigenstate by deterministic index
//! eigen-uniform:<lo>..<hi>  uniform superposition over eigenstates
//!                           lo..hi (inclusive ends)
//! gs-plus-allup:a=<real>    (|ground⟩ + a|all-up⟩) / sqrt(1+a²)
//! mixture:p=<real>          p·|all-up⟩⟨all-up| + (1-p)·|ground⟩⟨ground|
//! ```

use num_complex::Complex64;
use zenochain::model::{self, ChainConfig, Spin};
use zenochain::numerics::{self, ComplexVector, HermitianEigen};
use zenochain::protocol::MixedState;

use crate::error::CliError;

/// A parsed initial state: pure vector or statistical mixture.
pub enum InitialState {
    Pure(ComplexVector),
    Mixed(MixedState),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum StateSpecError {
    #[error("parse error at byte {position} of {spec:?}: {message}")]
    Parse {
        spec: String,
        position: usize,
        message: String,
    },
    #[error("eigenstate index {index} out of range (chain dimension {dim})")]
    InvalidIndex { index: usize, dim: usize },
}

impl From<StateSpecError> for CliError {
    fn from(err: StateSpecError) -> Self {
        CliError::Config(err.to_string())
    }
}

fn parse_err(spec: &str, position: usize, message: impl Into<String>) -> StateSpecError {
    StateSpecError::Parse {
        spec: spec.to_string(),
        position,
        message: message.into(),
    }
}

/// Chain eigensystem used by eigenstate-indexed specifications.
pub fn chain_eigensystem(config: &ChainConfig) -> Result<HermitianEigen, CliError> {
    Ok(model::chain_eigenbasis(config)?)
}

/// Parses an initial-state specification into a normalized state.
///
/// Eigenstate-indexed forms use the deterministic eigenbasis ordering of
/// the library; the decomposition is computed on demand.
pub fn parse_initial_state(spec: &str, config: &ChainConfig) -> Result<InitialState, CliError> {
    let dim = config.chain_dim();
    if spec == "random" {
        let seed = numerics::derive_stream_seed(config.seed, 0);
        return Ok(InitialState::Pure(numerics::random_state(dim, seed)));
    }
    if spec == "random-polaron" {
        let seed = numerics::derive_stream_seed(config.seed, 0);
        return Ok(InitialState::Pure(random_polaron_state(config, seed)));
    }
    let (tag, rest, rest_at) = match spec.find(':') {
        Some(at) => (&spec[..at], &spec[at + 1..], at + 1),
        None => {
            return Err(parse_err(spec, 0, "unknown state form (missing ':' payload)").into());
        }
    };
    match tag {
        "product" => {
            if rest.len() != config.n_spins {
                return Err(parse_err(
                    spec,
                    rest_at,
                    format!(
                        "expected {} site letters, got {}",
                        config.n_spins,
                        rest.len()
                    ),
                )
                .into());
            }
            let mut spins = Vec::with_capacity(config.n_spins);
            for (offset, letter) in rest.char_indices() {
                spins.push(match letter {
                    'u' => Spin::Up,
                    'd' => Spin::Down,
                    _ => {
                        return Err(parse_err(
                            spec,
                            rest_at + offset,
                            format!("invalid site letter {letter:?} (expected 'u' or 'd')"),
                        )
                        .into());
                    }
                });
            }
            Ok(InitialState::Pure(model::product_state(&spins, None)))
        }
        "eigen" => {
            let index: usize = rest.parse().map_err(|_| {
                parse_err(spec, rest_at, format!("invalid eigenstate index {rest:?}"))
            })?;
            if index >= dim {
                return Err(StateSpecError::InvalidIndex { index, dim }.into());
            }
            let eigen = chain_eigensystem(config)?;
            Ok(InitialState::Pure(eigen.eigenvectors[index].clone()))
        }
        "eigen-uniform" => {
            let (lo, hi) = crate::config::parse_range(rest).ok_or_else(|| {
                parse_err(
                    spec,
                    rest_at,
                    format!("invalid index range {rest:?} (expected lo..hi)"),
                )
            })?;
            if hi < lo {
                return Err(parse_err(spec, rest_at, "empty index range").into());
            }
            if hi >= dim {
                return Err(StateSpecError::InvalidIndex { index: hi, dim }.into());
            }
            let eigen = chain_eigensystem(config)?;
            let weight = Complex64::new(1.0 / ((hi - lo + 1) as f64).sqrt(), 0.0);
            let mut state = ComplexVector::zeros(dim);
            for index in lo..=hi {
                state.add_scaled(weight, &eigen.eigenvectors[index]);
            }
            let state = state
                .normalized()
                .expect("uniform superposition of orthonormal vectors is nonzero");
            Ok(InitialState::Pure(state))
        }
        "gs-plus-allup" => {
            let amplitude = parse_named_real(spec, rest, rest_at, "a")?;
            let eigen = chain_eigensystem(config)?;
            let mut state = eigen.eigenvectors[0].clone();
            state.add_scaled(
                Complex64::new(amplitude, 0.0),
                &model::all_up_state(config.n_spins),
            );
            let state = state.normalized().ok_or_else(|| {
                CliError::Config("gs-plus-allup amplitude produced a null state".into())
            })?;
            Ok(InitialState::Pure(state))
        }
        "mixture" => {
            let p = parse_named_real(spec, rest, rest_at, "p")?;
            if !(0.0..=1.0).contains(&p) {
                return Err(parse_err(spec, rest_at, "weight p must lie in [0, 1]").into());
            }
            let eigen = chain_eigensystem(config)?;
            let nondecaying = model::all_up_state(config.n_spins);
            let decaying = eigen.eigenvectors[0].clone();
            let components = if p == 0.0 {
                vec![(1.0, decaying)]
            } else if p == 1.0 {
                vec![(1.0, nondecaying)]
            } else {
                vec![(p, nondecaying), (1.0 - p, decaying)]
            };
            Ok(InitialState::Mixed(
                MixedState::new(components).map_err(CliError::from)?,
            ))
        }
        _ => Err(parse_err(spec, 0, format!("unknown state form {tag:?}")).into()),
    }
}

/// Haar-random state on the sites after the first, with site 1 up.
pub fn random_polaron_state(config: &ChainConfig, seed: u64) -> ComplexVector {
    let rest = numerics::random_state(1 << (config.n_spins - 1), seed);
    let mut amps = vec![Complex64::ZERO; config.chain_dim()];
    for (rest_index, amp) in rest.amplitudes().iter().enumerate() {
        amps[rest_index << 1] = *amp;
    }
    ComplexVector::new(amps)
}

fn parse_named_real(spec: &str, rest: &str, rest_at: usize, name: &str) -> Result<f64, CliError> {
    let prefix = format!("{name}=");
    let value = rest.strip_prefix(&prefix).ok_or_else(|| {
        CliError::from(parse_err(spec, rest_at, format!("expected {name}=<real>")))
    })?;
    value.parse().map_err(|_| {
        CliError::from(parse_err(
            spec,
            rest_at + prefix.len(),
            format!("invalid real number {value:?}"),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use zenochain::subspace;

    fn config() -> ChainConfig {
        ChainConfig::default()
    }

    fn pure(spec: &str) -> ComplexVector {
        match parse_initial_state(spec, &config()).unwrap() {
            InitialState::Pure(v) => v,
            InitialState::Mixed(_) => panic!("expected pure state"),
        }
    }

    #[test]
    fn product_all_up_is_index_zero() {
        let v = pure("product:uuuuuu");
        assert_eq!(v.amp(0), Complex64::ONE);
    }

    #[test]
    fn eigen_uniform_matches_manual_construction() {
        let v = pure("eigen-uniform:0..16");
        assert!(v.is_unit());
        let eigen = chain_eigensystem(&config()).unwrap();
        let mut expected = ComplexVector::zeros(64);
        for l in 0..=16 {
            expected.add_scaled(
                Complex64::new(1.0 / 17f64.sqrt(), 0.0),
                &eigen.eigenvectors[l],
            );
        }
        assert!(v.fidelity(&expected.normalized().unwrap()) > 1.0 - 1e-12);
    }

    #[test]
    fn gs_plus_allup_has_expected_survival() {
        let v = pure("gs-plus-allup:a=0.05");
        let report = subspace::build_nondecaying_basis(&config()).unwrap();
        let p = subspace::predicted_survival(&v, &report);
        assert!((p - 0.0025 / 1.0025).abs() < 1e-10);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_initial_state("product:uuxuuu", &config()) {
            Err(CliError::Config(message)) => {
                assert!(message.contains("byte 10"), "{message}");
            }
            other => panic!("expected config error, got {:?}", other.is_ok()),
        }
        assert!(parse_initial_state("eigen:64", &config()).is_err());
        assert!(parse_initial_state("nonsense", &config()).is_err());
        assert!(parse_initial_state("mixture:p=1.5", &config()).is_err());
    }

    #[test]
    fn random_polaron_has_site_one_up() {
        let v = random_polaron_state(&config(), 7);
        assert!(v.is_unit());
        assert!((zenochain::model::site_magnetization(&v, 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixture_weights() {
        match parse_initial_state("mixture:p=0.3", &config()).unwrap() {
            InitialState::Mixed(m) => {
                assert_eq!(m.components.len(), 2);
                assert!((m.components[0].0 - 0.3).abs() < 1e-15);
            }
            InitialState::Pure(_) => panic!("expected mixture"),
        }
    }
}
