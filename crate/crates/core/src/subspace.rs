//! Decomposition of the chain Hilbert space into decaying and
//! non-decaying parts.
//!
//! A chain eigenstate annihilated by the measured-site projector is left
//! untouched (up to phase) by the whole measurement protocol; the span of
//! all such states is the non-decaying subspace. Two independent routes
//! identify it: a kernel construction inside each degenerate eigenspace
//! of the chain Hamiltonian (authoritative, `g`- and `τ`-independent) and
//! the count of real eigenvalues of the effective non-Hermitian
//! Hamiltonian (spectral cross-check).

use num_complex::Complex64;

use crate::model::{self, Boundary, ChainConfig, ModelError};
use crate::numerics::{self, ComplexMatrix, ComplexVector, NumericsError};
use crate::tolerances::{DARK_CLUSTER_FLOOR, PROJECTION_FLOOR, REALNESS_REL, SUBSPACE_KERNEL_TOL};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum SubspaceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("state has no surviving component (projection norm {norm:.3e})")]
    NoSurvivingComponent { norm: f64 },
    #[error("need at least {minimum} Monte Carlo samples (got {got})")]
    TooFewSamples { minimum: usize, got: usize },
}

/// Orthonormal basis of the non-decaying subspace together with its
/// dimension.
#[derive(Debug, Clone)]
pub struct SubspaceReport {
    /// Orthonormal non-decaying basis vectors, grouped by ascending
    /// chain energy.
    pub nd_basis: Vec<ComplexVector>,
    /// Dimension of the non-decaying subspace.
    pub nd_dimension: usize,
    /// Chain eigenvalue attached to each basis vector.
    pub energies: Vec<f64>,
}

/// Eigenvalues of the effective Hamiltonian split by realness.
#[derive(Debug, Clone)]
pub struct SpectrumClassification {
    /// All eigenvalues, sorted by (real, imaginary) ascending.
    pub eigenvalues: Vec<Complex64>,
    /// Indices with `|Im λ|` below the realness tolerance.
    pub real_indices: Vec<usize>,
    /// Complementary indices (strictly decaying modes).
    pub decaying_indices: Vec<usize>,
    /// Tolerance used for the split.
    pub realness_tolerance: f64,
}

impl SpectrumClassification {
    pub fn real_count(&self) -> usize {
        self.real_indices.len()
    }
}

/// One row of a dimension scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanEntry {
    pub n_spins: usize,
    pub boundary: Boundary,
    pub probe_site: usize,
    pub dimension: usize,
}

/// Builds the orthonormal non-decaying basis by the kernel construction.
///
/// For each degenerate eigenspace of the chain Hamiltonian with column
/// basis `U`, the kernel of `Π·U` is extracted by singular-value
/// thresholding and mapped back through `U`. The computation runs
/// sector by sector of the conserved total magnetization: the chain
/// Hamiltonian and the projector both preserve those sectors, so each
/// eigenspace kernel is the direct sum of its sector pieces and the
/// resulting span is identical to the dense construction. Within an
/// eigenspace the kernel vectors are ordered by descending overlap with
/// the lowest computational basis state and re-orthonormalized, which
/// makes the basis deterministic. The result does not depend on `g` or
/// `τ`.
pub fn build_nondecaying_basis(config: &ChainConfig) -> Result<SubspaceReport, SubspaceError> {
    config.validate().map_err(SubspaceError::Model)?;
    let h_chain = model::build_chain_hamiltonian(config)?;
    let dim = config.chain_dim();
    let probe_bit = config.probe_site - 1;

    // Indices grouped by number of flipped spins (conserved by the
    // exchange terms); ascending flip count puts the all-up sector first.
    let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); config.n_spins + 1];
    for index in 0..dim {
        sectors[index.count_ones() as usize].push(index);
    }

    let mut found: Vec<(f64, ComplexVector)> = Vec::new();
    for sector in &sectors {
        if sector.is_empty() {
            continue;
        }
        let block = ComplexMatrix::from_fn(sector.len(), sector.len(), |i, j| {
            h_chain.get(sector[i], sector[j])
        });
        let eig = numerics::hermitian_eigendecompose_raw(&block)?;
        for cluster in eig.clusters() {
            let members = &eig.eigenvectors[cluster.clone()];
            // Π is diagonal: applying it just masks the rows whose probed
            // bit is set.
            let masked = ComplexMatrix::from_fn(sector.len(), members.len(), |i, j| {
                if sector[i] >> probe_bit & 1 == 1 {
                    members[j].amp(i)
                } else {
                    Complex64::ZERO
                }
            });
            // A wholly dark cluster leaves only rounding noise in the
            // masked block; a relative singular-value cut would then
            // reject everything, so it is kept outright.
            let kernel = if masked.norm_spectral() <= DARK_CLUSTER_FLOOR {
                (0..members.len())
                    .map(|m| ComplexVector::basis_state(members.len(), m))
                    .collect()
            } else {
                numerics::kernel_basis(&masked, SUBSPACE_KERNEL_TOL)
            };
            for coords in &kernel {
                let mut embedded = ComplexVector::zeros(dim);
                for (m, member) in members.iter().enumerate() {
                    let weight = coords.amp(m);
                    for (row, &index) in sector.iter().enumerate() {
                        let amp = weight * member.amp(row);
                        embedded.amplitudes_mut()[index] += amp;
                    }
                }
                found.push((eig.eigenvalues[cluster.start], embedded));
            }
        }
    }

    // Regroup sector pieces into global eigenspaces, order deterministically
    // inside each, and polish orthonormality.
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let energies_raw: Vec<f64> = found.iter().map(|(e, _)| *e).collect();
    let mut nd_basis = Vec::with_capacity(found.len());
    let mut energies = Vec::with_capacity(found.len());
    for cluster in numerics::eigenvalue_clusters(&energies_raw) {
        let mut vectors: Vec<ComplexVector> = found[cluster.clone()]
            .iter()
            .map(|(_, v)| v.clone())
            .collect();
        vectors.sort_by(|a, b| b.amp(0).norm().total_cmp(&a.amp(0).norm()));
        orthonormalize(&mut vectors);
        let energy = energies_raw[cluster.start];
        energies.extend(std::iter::repeat_n(energy, vectors.len()));
        nd_basis.extend(vectors);
    }

    let nd_dimension = nd_basis.len();
    Ok(SubspaceReport {
        nd_basis,
        nd_dimension,
        energies,
    })
}

/// Modified Gram-Schmidt pass over near-orthonormal vectors.
fn orthonormalize(vectors: &mut [ComplexVector]) {
    for i in 0..vectors.len() {
        for j in 0..i {
            let overlap = vectors[j].inner(&vectors[i]);
            let prev = vectors[j].clone();
            vectors[i].add_scaled(-overlap, &prev);
        }
        let norm = vectors[i].norm();
        assert!(
            norm > 1e-12,
            "kernel vectors collapsed during orthonormalization"
        );
        let inv = Complex64::new(1.0 / norm, 0.0);
        for a in vectors[i].amplitudes_mut() {
            *a *= inv;
        }
    }
}

/// Closed-form non-decaying dimension for periodic chains:
/// `2^{(N-1)/2}` for odd `N`, `3·2^{(N-4)/2}` for even `N ≥ 4`.
pub fn periodic_dimension_formula(n_spins: usize) -> Option<usize> {
    if n_spins < 3 {
        return None;
    }
    if n_spins % 2 == 1 {
        Some(1usize << ((n_spins - 1) / 2))
    } else {
        Some(3 * (1usize << ((n_spins - 4) / 2)))
    }
}

/// Computes non-decaying dimensions over a grid of sizes and probe
/// positions. Positions exceeding a given size are skipped.
pub fn nondecaying_dimension_scan(
    sizes: &[usize],
    boundary: Boundary,
    probe_positions: &[usize],
) -> Result<Vec<ScanEntry>, SubspaceError> {
    let mut table = Vec::new();
    for &n in sizes {
        for &position in probe_positions {
            if position > n {
                continue;
            }
            let config = ChainConfig {
                n_spins: n,
                boundary,
                probe_site: position,
                coupling_g: 1.0,
                tau: 0.03,
                steps: 0,
                disconnect_step: None,
                seed: 0,
            };
            let report = build_nondecaying_basis(&config)?;
            table.push(ScanEntry {
                n_spins: n,
                boundary,
                probe_site: position,
                dimension: report.nd_dimension,
            });
        }
    }
    Ok(table)
}

/// Survival probability of the infinite protocol: the squared norm of the
/// projection of the initial state onto the non-decaying subspace.
pub fn predicted_survival(psi0: &ComplexVector, report: &SubspaceReport) -> f64 {
    report
        .nd_basis
        .iter()
        .map(|v| v.inner(psi0).norm_sqr())
        .sum()
}

/// Normalized orthogonal projection onto the non-decaying subspace; the
/// infinite-step limit of the protocol for states that survive at all.
pub fn project_nondecaying(
    psi: &ComplexVector,
    report: &SubspaceReport,
) -> Result<ComplexVector, SubspaceError> {
    let mut projected = ComplexVector::zeros(psi.dim());
    for v in &report.nd_basis {
        projected.add_scaled(v.inner(psi), v);
    }
    let norm = projected.norm();
    if norm <= PROJECTION_FLOOR {
        return Err(SubspaceError::NoSurvivingComponent { norm });
    }
    Ok(projected.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// Analytic versus Monte Carlo average survival probability for
/// Haar-random initial states.
#[derive(Debug, Clone, Copy)]
pub struct AverageSurvival {
    /// `dim(non-decaying) / dim(chain)`.
    pub analytic: f64,
    /// Sample mean of the predicted survival over Haar states.
    pub monte_carlo: f64,
    /// Standard error of the sample mean.
    pub mc_stderr: f64,
}

/// Estimates the Haar-average survival probability with `samples` draws
/// seeded from the configuration seed.
pub fn average_survival(
    config: &ChainConfig,
    samples: usize,
) -> Result<AverageSurvival, SubspaceError> {
    const MINIMUM: usize = 100;
    if samples < MINIMUM {
        return Err(SubspaceError::TooFewSamples {
            minimum: MINIMUM,
            got: samples,
        });
    }
    let report = build_nondecaying_basis(config)?;
    let dim = config.chain_dim();
    let analytic = report.nd_dimension as f64 / dim as f64;

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for index in 0..samples {
        let seed = numerics::derive_stream_seed(config.seed, index as u64);
        let state = numerics::random_state(dim, seed);
        let p = predicted_survival(&state, &report);
        sum += p;
        sum_sq += p * p;
    }
    let mean = sum / samples as f64;
    let variance = (sum_sq / samples as f64 - mean * mean).max(0.0);
    let mc_stderr = (variance / samples as f64).sqrt();
    Ok(AverageSurvival {
        analytic,
        monte_carlo: mean,
        mc_stderr,
    })
}

/// Splits the spectrum of the effective Hamiltonian into real and
/// decaying eigenvalues by the realness tolerance
/// `REALNESS_REL · max(1, 2g²τ)`.
pub fn classify_spectrum(config: &ChainConfig) -> Result<SpectrumClassification, SubspaceError> {
    let h_eff = model::build_effective_hamiltonian(config)?;
    let decomposition = numerics::general_eigendecompose(&h_eff)?;
    let realness_tolerance = REALNESS_REL * config.field_strength().max(1.0);
    let mut real_indices = Vec::new();
    let mut decaying_indices = Vec::new();
    for (index, lambda) in decomposition.eigenvalues.iter().enumerate() {
        if lambda.im.abs() <= realness_tolerance {
            real_indices.push(index);
        } else {
            decaying_indices.push(index);
        }
    }
    Ok(SpectrumClassification {
        eigenvalues: decomposition.eigenvalues,
        real_indices,
        decaying_indices,
        realness_tolerance,
    })
}
