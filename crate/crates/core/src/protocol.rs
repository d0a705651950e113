//! The discrete evolution-measurement loop and its continuous
//! non-Hermitian counterpart.
//!
//! One protocol step evolves chain plus probe for a time `τ`, then
//! post-selects the probe in its up state. On the chain alone this is the
//! contraction `V`, the probe-up block of the joint propagator. States
//! are renormalized every step (mathematically identical to a single
//! final normalization, numerically safe over long runs) and the survival
//! probability is accumulated as the running product of step successes.

use num_complex::Complex64;

use crate::model::{self, ChainConfig, ModelError};
use crate::numerics::{self, ComplexMatrix, ComplexVector, NumericsError};
use crate::tolerances::{
    CONVERGENCE_EPS, CONVERGENCE_RUN, INPUT_NORMALIZATION_ABS, ZERO_NORM_FLOOR,
};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ProtocolError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("initial state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("state fully decayed at step {step} (survival {survival:.3e} at last valid step)")]
    ZeroNorm { step: usize, survival: f64 },
    #[error("time grid must start at 0 and ascend")]
    InvalidTimeGrid,
    #[error("mixture weights must be nonnegative and sum to 1 (got {sum})")]
    InvalidMixture { sum: f64 },
}

/// Time series produced by one protocol run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Times `t = kτ` (entry 0 is the initial state).
    pub times: Vec<f64>,
    /// Per-site magnetization profile at each recorded time.
    pub magnetizations: Vec<Vec<f64>>,
    /// Step success probabilities `p_k`; entry 0 is 1 by convention.
    pub step_probabilities: Vec<f64>,
    /// Cumulative survival `P_k = p_1 ⋯ p_k`, starting at 1.
    pub cumulative_survival: Vec<f64>,
    /// Normalized state after the final recorded step.
    pub final_state: ComplexVector,
    /// Labeled events, e.g. the probe-disconnect time.
    pub phase_markers: Vec<(f64, String)>,
}

impl Trajectory {
    /// Number of recorded rows (steps plus the initial entry).
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Final cumulative survival probability.
    pub fn survival(&self) -> f64 {
        *self
            .cumulative_survival
            .last()
            .expect("nonempty trajectory")
    }

    /// Verifies the structural invariants of a recorded trajectory.
    pub fn check_invariants(&self) -> Result<(), String> {
        let rows = self.times.len();
        if self.magnetizations.len() != rows
            || self.step_probabilities.len() != rows
            || self.cumulative_survival.len() != rows
        {
            return Err("ragged trajectory columns".into());
        }
        let mut product = 1.0;
        for k in 0..rows {
            let p = self.cumulative_survival[k];
            if !(0.0..=1.0 + 1e-12).contains(&p) {
                return Err(format!("survival {p} out of range at step {k}"));
            }
            if k > 0 && p > self.cumulative_survival[k - 1] + 1e-12 {
                return Err(format!("survival increases at step {k}"));
            }
            product *= self.step_probabilities[k];
            if (product - p).abs() > 1e-10 * product.max(1e-30) + 1e-12 {
                return Err(format!("survival is not the running product at step {k}"));
            }
            for (site, z) in self.magnetizations[k].iter().enumerate() {
                if z.abs() > 1.0 + 1e-9 {
                    return Err(format!(
                        "magnetization {z} out of range at step {k} site {site}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Early-stop record from a convergence-detected run.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceInfo {
    /// Whether the step probabilities settled at 1 before the cap.
    pub converged: bool,
    /// Number of protocol steps actually executed.
    pub steps_run: usize,
    /// Cumulative survival at the stopping point.
    pub survival_at_stop: f64,
}

/// The non-unitary step operator: the probe-up block of the joint
/// propagator `exp(-iHτ)`. A contraction of a unitary, so `‖V‖ ≤ 1`.
pub fn step_operator(config: &ChainConfig) -> Result<ComplexMatrix, ProtocolError> {
    let h_total = model::build_total_hamiltonian(config)?;
    let propagator = numerics::matrix_exponential(&h_total, Complex64::new(0.0, -config.tau))?;
    Ok(propagator.top_left_block(config.chain_dim()))
}

/// Unitary propagator of the bare chain over one step interval.
fn chain_propagator(config: &ChainConfig) -> Result<ComplexMatrix, ProtocolError> {
    let h_chain = model::build_chain_hamiltonian(config)?;
    Ok(numerics::matrix_exponential(
        &h_chain,
        Complex64::new(0.0, -config.tau),
    )?)
}

/// Precomputed propagators for repeated protocol runs over the same
/// configuration (ensembles amortize the exponentials this way).
pub struct ProtocolEngine {
    config: ChainConfig,
    step: ComplexMatrix,
    free: Option<ComplexMatrix>,
}

impl ProtocolEngine {
    pub fn new(config: &ChainConfig) -> Result<Self, ProtocolError> {
        config.validate()?;
        let step = step_operator(config)?;
        let free = match config.disconnect_step {
            Some(d) if d < config.steps => Some(chain_propagator(config)?),
            _ => None,
        };
        Ok(Self {
            config: config.clone(),
            step,
            free,
        })
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn step_operator(&self) -> &ComplexMatrix {
        &self.step
    }

    /// Runs exactly `config.steps` steps; see [`run_measurement_protocol`].
    pub fn run(&self, psi0: &ComplexVector) -> Result<Trajectory, ProtocolError> {
        require_chain_state(&self.config, psi0)?;

        let mut recorder = Recorder::with_capacity(self.config.steps + 1);
        let mut state = psi0.clone();
        let mut survival = 1.0f64;
        recorder.push(0.0, &state, 1.0, survival);

        for step in 1..=self.config.steps {
            let measuring = self.config.disconnect_step.is_none_or(|d| step <= d);
            let (next, p) = if measuring {
                let image = self.step.apply(&state);
                let p = image.norm_sqr();
                if p < ZERO_NORM_FLOOR || survival * p < ZERO_NORM_FLOOR {
                    return Err(ProtocolError::ZeroNorm { step, survival });
                }
                (image, p)
            } else {
                (
                    self.free
                        .as_ref()
                        .expect("free propagator built")
                        .apply(&state),
                    1.0,
                )
            };
            survival *= p;
            state = next
                .normalized()
                .ok_or(ProtocolError::ZeroNorm { step, survival })?;
            recorder.push(step as f64 * self.config.tau, &state, p, survival);
        }

        let markers = self
            .config
            .disconnect_step
            .map(|d| vec![(d as f64 * self.config.tau, "probe-disconnected".to_string())])
            .unwrap_or_default();
        Ok(recorder.into_trajectory(state, markers))
    }

    /// Convergence-detected run; see [`run_until_converged`].
    pub fn run_until_converged(
        &self,
        psi0: &ComplexVector,
        max_steps: usize,
    ) -> Result<(Trajectory, ConvergenceInfo), ProtocolError> {
        require_chain_state(&self.config, psi0)?;

        let mut recorder = Recorder::with_capacity(1024);
        let mut state = psi0.clone();
        let mut survival = 1.0f64;
        recorder.push(0.0, &state, 1.0, survival);

        let mut settled = 0usize;
        let mut steps_run = 0usize;
        let mut converged = false;
        for step in 1..=max_steps {
            let image = self.step.apply(&state);
            let p = image.norm_sqr();
            if p < ZERO_NORM_FLOOR || survival * p < ZERO_NORM_FLOOR {
                return Err(ProtocolError::ZeroNorm { step, survival });
            }
            survival *= p;
            state = image
                .normalized()
                .ok_or(ProtocolError::ZeroNorm { step, survival })?;
            recorder.push(step as f64 * self.config.tau, &state, p, survival);
            steps_run = step;
            if (1.0 - p).abs() < CONVERGENCE_EPS {
                settled += 1;
                if settled >= CONVERGENCE_RUN {
                    converged = true;
                    break;
                }
            } else {
                settled = 0;
            }
        }

        let info = ConvergenceInfo {
            converged,
            steps_run,
            survival_at_stop: survival,
        };
        Ok((recorder.into_trajectory(state, Vec::new()), info))
    }
}

fn require_chain_state(config: &ChainConfig, psi0: &ComplexVector) -> Result<(), ProtocolError> {
    if psi0.dim() != config.chain_dim() {
        return Err(ProtocolError::Model(ModelError::StateDimensionMismatch {
            expected: config.chain_dim(),
            got: psi0.dim(),
        }));
    }
    if !psi0.is_normalized(INPUT_NORMALIZATION_ABS) {
        return Err(ProtocolError::NotNormalized { norm: psi0.norm() });
    }
    Ok(())
}

struct Recorder {
    times: Vec<f64>,
    magnetizations: Vec<Vec<f64>>,
    step_probabilities: Vec<f64>,
    cumulative_survival: Vec<f64>,
}

impl Recorder {
    fn with_capacity(rows: usize) -> Self {
        Self {
            times: Vec::with_capacity(rows),
            magnetizations: Vec::with_capacity(rows),
            step_probabilities: Vec::with_capacity(rows),
            cumulative_survival: Vec::with_capacity(rows),
        }
    }

    fn push(&mut self, time: f64, state: &ComplexVector, step_probability: f64, survival: f64) {
        self.times.push(time);
        self.magnetizations
            .push(model::magnetization_profile(state));
        self.step_probabilities.push(step_probability);
        self.cumulative_survival.push(survival);
    }

    fn into_trajectory(
        self,
        final_state: ComplexVector,
        markers: Vec<(f64, String)>,
    ) -> Trajectory {
        Trajectory {
            times: self.times,
            magnetizations: self.magnetizations,
            step_probabilities: self.step_probabilities,
            cumulative_survival: self.cumulative_survival,
            final_state,
            phase_markers: markers,
        }
    }
}

/// Runs exactly `config.steps` protocol steps from a normalized chain
/// state. After `disconnect_step` (when set) the probe is removed and the
/// remaining steps evolve unitarily under the bare chain with unit step
/// probability.
pub fn run_measurement_protocol(
    config: &ChainConfig,
    psi0: &ComplexVector,
) -> Result<Trajectory, ProtocolError> {
    ProtocolEngine::new(config)?.run(psi0)
}

/// Runs the measurement loop until the step probability settles at 1
/// (`|1 - p| < CONVERGENCE_EPS` for `CONVERGENCE_RUN` consecutive steps)
/// or `max_steps` is reached. Ignores `disconnect_step`.
pub fn run_until_converged(
    config: &ChainConfig,
    psi0: &ComplexVector,
    max_steps: usize,
) -> Result<(Trajectory, ConvergenceInfo), ProtocolError> {
    ProtocolEngine::new(config)?.run_until_converged(psi0, max_steps)
}

/// Continuous evolution under the effective non-Hermitian Hamiltonian,
/// sampled on an ascending time grid starting at 0.
///
/// The spectral route expands the state over the biorthogonal eigensystem;
/// if that decomposition is numerically defective the evolution falls
/// back to repeated short-step exponentials with `δt = τ/10`.
pub fn run_effective_evolution(
    config: &ChainConfig,
    psi0: &ComplexVector,
    t_grid: &[f64],
) -> Result<Trajectory, ProtocolError> {
    config.validate()?;
    require_chain_state(config, psi0)?;
    if t_grid.is_empty() || t_grid[0] < 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ProtocolError::InvalidTimeGrid);
    }
    let unnormalized_states = effective_states(config, psi0, t_grid)?;

    let mut recorder = Recorder::with_capacity(t_grid.len());
    let mut previous_survival = 1.0f64;
    let mut final_state = None;
    for (&t, raw) in t_grid.iter().zip(&unnormalized_states) {
        let survival = raw.norm_sqr();
        if survival < ZERO_NORM_FLOOR {
            return Err(ProtocolError::ZeroNorm {
                step: recorder.times.len(),
                survival: previous_survival,
            });
        }
        let normalized = raw.normalized().expect("norm floor checked");
        let step_probability = if recorder.times.is_empty() {
            1.0
        } else {
            survival / previous_survival
        };
        recorder.push(t, &normalized, step_probability, survival);
        previous_survival = survival;
        final_state = Some(normalized);
    }
    Ok(recorder.into_trajectory(final_state.expect("nonempty grid"), Vec::new()))
}

/// Unnormalized states of the effective evolution at each grid time.
fn effective_states(
    config: &ChainConfig,
    psi0: &ComplexVector,
    t_grid: &[f64],
) -> Result<Vec<ComplexVector>, ProtocolError> {
    let h_eff = model::build_effective_hamiltonian(config)?;
    match numerics::general_eigendecompose(&h_eff) {
        Ok(decomposition) => {
            let coefficients = decomposition.coefficients(psi0);
            Ok(t_grid
                .iter()
                .map(|&t| {
                    let mut acc = ComplexVector::zeros(psi0.dim());
                    for ((lambda, alpha), c) in decomposition
                        .eigenvalues
                        .iter()
                        .zip(&decomposition.right_vectors)
                        .zip(&coefficients)
                    {
                        let phase = (Complex64::new(0.0, -1.0) * lambda * t).exp();
                        acc.add_scaled(c * phase, alpha);
                    }
                    acc
                })
                .collect())
        }
        Err(NumericsError::Defective { .. }) => {
            let dt = config.tau / 10.0;
            let short = numerics::matrix_exponential(&h_eff, Complex64::new(0.0, -dt))?;
            let mut states = Vec::with_capacity(t_grid.len());
            let mut current = psi0.clone();
            let mut reached = 0.0f64;
            for &t in t_grid {
                while t - reached > dt * (1.0 + 1e-9) {
                    current = short.apply(&current);
                    reached += dt;
                }
                let remainder = t - reached;
                if remainder > 1e-13 {
                    let step =
                        numerics::matrix_exponential(&h_eff, Complex64::new(0.0, -remainder))?;
                    current = step.apply(&current);
                    reached = t;
                }
                states.push(current.clone());
            }
            Ok(states)
        }
        Err(err) => Err(err.into()),
    }
}

/// Deviation between the discrete protocol and the continuous effective
/// evolution on the same grid.
#[derive(Debug, Clone, Copy)]
pub struct DeviationReport {
    /// `max_k (1 - |⟨ψ_k^disc|ψ^cont(kτ)⟩|²)`.
    pub max_infidelity: f64,
    /// `max_k |P_k^disc - P^cont(kτ)|`.
    pub max_survival_gap: f64,
    /// `max_{k,n} |⟨Z_n⟩_disc - ⟨Z_n⟩_cont|` over steps and sites.
    pub max_magnetization_gap: f64,
}

/// Runs both evolutions over `config.steps` intervals of `τ` (without any
/// probe disconnect) and reports the worst-case state infidelity and
/// survival gap.
pub fn compare_discrete_continuous(
    config: &ChainConfig,
    psi0: &ComplexVector,
) -> Result<DeviationReport, ProtocolError> {
    let mut measured = config.clone();
    measured.disconnect_step = None;
    measured.validate()?;
    require_chain_state(&measured, psi0)?;

    let v = step_operator(&measured)?;
    let grid: Vec<f64> = (0..=measured.steps)
        .map(|k| k as f64 * measured.tau)
        .collect();
    let continuous = effective_states(&measured, psi0, &grid)?;

    let mut discrete_state = psi0.clone();
    let mut discrete_survival = 1.0f64;
    let mut max_infidelity = 0.0f64;
    let mut max_survival_gap = 0.0f64;
    let mut max_magnetization_gap = 0.0f64;
    for (k, raw) in continuous.iter().enumerate() {
        if k > 0 {
            let image = v.apply(&discrete_state);
            let p = image.norm_sqr();
            if p < ZERO_NORM_FLOOR {
                return Err(ProtocolError::ZeroNorm {
                    step: k,
                    survival: discrete_survival,
                });
            }
            discrete_survival *= p;
            discrete_state = image.normalized().expect("norm floor checked");
        }
        let cont_survival = raw.norm_sqr();
        let cont_state = raw.normalized().ok_or(ProtocolError::ZeroNorm {
            step: k,
            survival: discrete_survival,
        })?;
        max_infidelity = max_infidelity.max(1.0 - discrete_state.fidelity(&cont_state));
        max_survival_gap = max_survival_gap.max((discrete_survival - cont_survival).abs());
        let disc_profile = model::magnetization_profile(&discrete_state);
        let cont_profile = model::magnetization_profile(&cont_state);
        for (a, b) in disc_profile.iter().zip(&cont_profile) {
            max_magnetization_gap = max_magnetization_gap.max((a - b).abs());
        }
    }
    Ok(DeviationReport {
        max_infidelity,
        max_survival_gap,
        max_magnetization_gap,
    })
}

/// Statistical mixture of pure chain states.
#[derive(Debug, Clone)]
pub struct MixedState {
    /// `(weight, state)` pairs; weights are nonnegative and sum to 1.
    pub components: Vec<(f64, ComplexVector)>,
}

impl MixedState {
    pub fn new(components: Vec<(f64, ComplexVector)>) -> Result<Self, ProtocolError> {
        let sum: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(ProtocolError::InvalidMixture { sum });
        }
        Ok(Self { components })
    }

    /// The component with the largest weight.
    pub fn dominant(&self) -> &(f64, ComplexVector) {
        self.components
            .iter()
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .expect("nonempty mixture")
    }
}

/// Evolves a mixture through the protocol. Each component runs
/// independently (the map is linear on unnormalized states); surviving
/// weights are reweighted by their survival probabilities. Components
/// that decay completely are dropped with weight zero.
pub fn run_mixed_protocol(
    config: &ChainConfig,
    rho0: &MixedState,
) -> Result<(MixedState, f64), ProtocolError> {
    let mut survived: Vec<(f64, ComplexVector)> = Vec::new();
    let mut survival = 0.0f64;
    let mut last_decay_step = 0usize;
    for (weight, state) in &rho0.components {
        match run_measurement_protocol(config, state) {
            Ok(trajectory) => {
                let p = trajectory.survival();
                survival += weight * p;
                survived.push((weight * p, trajectory.final_state));
            }
            Err(ProtocolError::ZeroNorm { step, .. }) => {
                last_decay_step = last_decay_step.max(step);
            }
            Err(other) => return Err(other),
        }
    }
    if survival <= 0.0 || survived.is_empty() {
        return Err(ProtocolError::ZeroNorm {
            step: last_decay_step,
            survival: 0.0,
        });
    }
    for (weight, _) in &mut survived {
        *weight /= survival;
    }
    Ok((
        MixedState {
            components: survived,
        },
        survival,
    ))
}
