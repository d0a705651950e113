//! Chain and probe operators in a fixed computational basis.
//!
//! Basis convention: spin `n` (1-based) occupies bit `n-1` of the
//! computational index, bit value 0 is `|↑⟩` and 1 is `|↓⟩`, so index 0
//! is the all-up chain state. When the probe is present it occupies the
//! most significant bit (bit `N`), which makes the probe-up block of a
//! joint operator its leading `2^N × 2^N` quadrant.

use std::str::FromStr;

use num_complex::Complex64;

use crate::numerics::{self, ComplexMatrix, ComplexVector, HermitianEigen, NumericsError};

/// Boundary condition of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Periodic => write!(f, "periodic"),
            Boundary::Open => write!(f, "open"),
        }
    }
}

impl FromStr for Boundary {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(ModelError::UnknownBoundary {
                value: other.to_string(),
            }),
        }
    }
}

/// Single-site spin value in a product-state specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// Full parameterization of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    /// Number of chain spins `N ≥ 2` (`≥ 3` for periodic boundaries).
    pub n_spins: usize,
    pub boundary: Boundary,
    /// 1-based site the probe couples to.
    pub probe_site: usize,
    /// Probe-chain coupling strength `g`.
    pub coupling_g: f64,
    /// Interval between measurements, `τ > 0`.
    pub tau: f64,
    /// Number of evolution-measurement steps.
    pub steps: usize,
    /// Step after which the probe is removed and evolution turns unitary.
    pub disconnect_step: Option<usize>,
    /// Master seed for every random draw tied to this configuration.
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            n_spins: 6,
            boundary: Boundary::Periodic,
            probe_site: 1,
            coupling_g: 4.0,
            tau: 0.03,
            steps: 400,
            disconnect_step: None,
            seed: 1,
        }
    }
}

impl ChainConfig {
    /// Hilbert-space dimension of the chain alone.
    pub fn chain_dim(&self) -> usize {
        1usize << self.n_spins
    }

    /// Hilbert-space dimension of chain plus probe.
    pub fn total_dim(&self) -> usize {
        1usize << (self.n_spins + 1)
    }

    /// Magnitude of the anti-Hermitian field, `2g²τ`.
    pub fn field_strength(&self) -> f64 {
        2.0 * self.coupling_g * self.coupling_g * self.tau
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n_spins < 2 {
            return Err(ModelError::TooFewSpins {
                n_spins: self.n_spins,
            });
        }
        if self.boundary == Boundary::Periodic && self.n_spins < 3 {
            return Err(ModelError::PeriodicTooSmall {
                n_spins: self.n_spins,
            });
        }
        if self.probe_site < 1 || self.probe_site > self.n_spins {
            return Err(ModelError::ProbeSiteOutOfRange {
                site: self.probe_site,
                n_spins: self.n_spins,
            });
        }
        if self.tau.is_nan() || self.tau <= 0.0 {
            return Err(ModelError::NonPositiveTau { tau: self.tau });
        }
        if let Some(d) = self.disconnect_step {
            if d > self.steps {
                return Err(ModelError::DisconnectAfterEnd {
                    disconnect: d,
                    steps: self.steps,
                });
            }
        }
        Ok(())
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ModelError {
    #[error("chain requires at least 2 spins (got {n_spins})")]
    TooFewSpins { n_spins: usize },
    #[error("periodic boundary requires at least 3 spins (got {n_spins}); N=2 would double-count the single bond")]
    PeriodicTooSmall { n_spins: usize },
    #[error("probe site {site} outside 1..={n_spins}")]
    ProbeSiteOutOfRange { site: usize, n_spins: usize },
    #[error("tau must be positive (got {tau})")]
    NonPositiveTau { tau: f64 },
    #[error("disconnect step {disconnect} exceeds total step count {steps}")]
    DisconnectAfterEnd { disconnect: usize, steps: usize },
    #[error("unknown boundary {value:?} (expected \"periodic\" or \"open\")")]
    UnknownBoundary { value: String },
    #[error("site {site} outside 1..={n_spins}")]
    SiteOutOfRange { site: usize, n_spins: usize },
    #[error("expected {expected} site entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("state dimension {got} does not match chain dimension {expected}")]
    StateDimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Nearest-neighbour bonds of the chain as 0-based bit positions.
fn bonds(config: &ChainConfig) -> Vec<(usize, usize)> {
    let n = config.n_spins;
    match config.boundary {
        Boundary::Periodic => (0..n).map(|b| (b, (b + 1) % n)).collect(),
        Boundary::Open => (0..n - 1).map(|b| (b, b + 1)).collect(),
    }
}

/// Adds `coefficient · (X_a X_b + Y_a Y_b)` over bits `a, b` to a dense
/// matrix. The exchange term flips a pair of anti-aligned bits with
/// amplitude `2 · coefficient` and annihilates aligned pairs.
fn add_exchange(
    matrix: &mut ComplexMatrix,
    dim: usize,
    bit_a: usize,
    bit_b: usize,
    coefficient: f64,
) {
    let mask = (1usize << bit_a) | (1usize << bit_b);
    let amp = Complex64::new(2.0 * coefficient, 0.0);
    for index in 0..dim {
        let a_set = index >> bit_a & 1;
        let b_set = index >> bit_b & 1;
        if a_set != b_set {
            matrix.add_to_entry(index ^ mask, index, amp);
        }
    }
}

/// Bare chain Hamiltonian: isotropic in-plane exchange with unit coupling
/// over every bond.
pub fn build_chain_hamiltonian(config: &ChainConfig) -> Result<ComplexMatrix, ModelError> {
    config.validate()?;
    let dim = config.chain_dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (a, b) in bonds(config) {
        add_exchange(&mut h, dim, a, b, 1.0);
    }
    Ok(h)
}

/// Chain plus probe Hamiltonian on the doubled Hilbert space. The probe
/// couples to `probe_site` with strength `g` through the same in-plane
/// exchange.
pub fn build_total_hamiltonian(config: &ChainConfig) -> Result<ComplexMatrix, ModelError> {
    config.validate()?;
    let dim = config.total_dim();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (a, b) in bonds(config) {
        add_exchange(&mut h, dim, a, b, 1.0);
    }
    add_exchange(
        &mut h,
        dim,
        config.probe_site - 1,
        config.n_spins,
        config.coupling_g,
    );
    Ok(h)
}

/// Projector onto "probe site is down": `|↓⟩⟨↓|` at the probed site,
/// identity elsewhere. Diagonal in the computational basis.
pub fn build_projector_pi(config: &ChainConfig) -> Result<ComplexMatrix, ModelError> {
    config.validate()?;
    let dim = config.chain_dim();
    let bit = config.probe_site - 1;
    let mut pi = ComplexMatrix::zeros(dim, dim);
    for index in 0..dim {
        if index >> bit & 1 == 1 {
            pi.set(index, index, Complex64::ONE);
        }
    }
    Ok(pi)
}

/// Effective non-Hermitian generator of the measured dynamics: the bare
/// chain Hamiltonian plus a local imaginary field `-2ig²τ` on the probed
/// site. Its Hermitian part equals the chain Hamiltonian exactly.
pub fn build_effective_hamiltonian(config: &ChainConfig) -> Result<ComplexMatrix, ModelError> {
    let h_chain = build_chain_hamiltonian(config)?;
    let pi = build_projector_pi(config)?;
    Ok(h_chain.add(&pi.scaled(Complex64::new(0.0, -config.field_strength()))))
}

/// Expectation value `⟨Z_site⟩` of a normalized chain state.
pub fn site_magnetization(state: &ComplexVector, site: usize) -> Result<f64, ModelError> {
    let dim = state.dim();
    let n_spins = dim.trailing_zeros() as usize;
    assert!(
        dim.is_power_of_two(),
        "state dimension must be a power of two"
    );
    if site < 1 || site > n_spins {
        return Err(ModelError::SiteOutOfRange { site, n_spins });
    }
    let bit = site - 1;
    let mut z = 0.0;
    for (index, amp) in state.amplitudes().iter().enumerate() {
        let sign = if index >> bit & 1 == 0 { 1.0 } else { -1.0 };
        z += sign * amp.norm_sqr();
    }
    Ok(z)
}

/// Per-site magnetization profile `⟨Z_1⟩ … ⟨Z_N⟩`.
pub fn magnetization_profile(state: &ComplexVector) -> Vec<f64> {
    let n_spins = state.dim().trailing_zeros() as usize;
    (1..=n_spins)
        .map(|site| site_magnetization(state, site).expect("site within range"))
        .collect()
}

/// Total chain magnetization `Σ_n ⟨Z_n⟩`.
pub fn total_magnetization(state: &ComplexVector) -> f64 {
    magnetization_profile(state).iter().sum()
}

/// Computational basis product state; the optional probe occupies the
/// most significant bit.
pub fn product_state(spins: &[Spin], probe: Option<Spin>) -> ComplexVector {
    assert!(!spins.is_empty(), "need at least one site");
    let mut index = 0usize;
    for (site, spin) in spins.iter().enumerate() {
        if *spin == Spin::Down {
            index |= 1 << site;
        }
    }
    let mut dim = 1usize << spins.len();
    if let Some(p) = probe {
        if p == Spin::Down {
            index |= dim;
        }
        dim <<= 1;
    }
    ComplexVector::basis_state(dim, index)
}

/// The all-up chain state `|⇑⟩` (computational index 0).
pub fn all_up_state(n_spins: usize) -> ComplexVector {
    product_state(&vec![Spin::Up; n_spins], None)
}

/// Chain eigenbasis with the experiment indexing convention: eigenvalues
/// ascending, and within each degenerate cluster the representatives
/// ordered by descending measured-site occupation `⟨Π_p⟩` (fastest
/// protocol decay first), ties by the generic numerics order.
///
/// Eigenstate-indexed initial states (`eigen:<l>` and friends) use this
/// basis. Uniform superpositions over whole clusters do not depend on
/// the in-cluster order.
pub fn chain_eigenbasis(config: &ChainConfig) -> Result<HermitianEigen, ModelError> {
    let h = build_chain_hamiltonian(config)?;
    let mut eigen = numerics::hermitian_eigendecompose(&h)?;
    let probe_bit = config.probe_site - 1;
    let occupation = |v: &ComplexVector| -> f64 {
        v.amplitudes()
            .iter()
            .enumerate()
            .filter(|(index, _)| index >> probe_bit & 1 == 1)
            .map(|(_, amp)| amp.norm_sqr())
            .sum()
    };
    for cluster in eigen.clusters() {
        if cluster.len() < 2 {
            continue;
        }
        let mut members: Vec<(f64, ComplexVector)> = eigen.eigenvectors[cluster.clone()]
            .iter()
            .map(|v| (occupation(v), v.clone()))
            .collect();
        members.sort_by(|a, b| b.0.total_cmp(&a.0));
        for (slot, (_, vector)) in members.into_iter().enumerate() {
            eigen.eigenvectors[cluster.start + slot] = vector;
        }
    }
    Ok(eigen)
}
