//! Numerical tolerances used across the crate.
//!
//! Every threshold lives here with a one-line justification so that no
//! module carries ad-hoc magic numbers.

/// Relative Hermiticity defect allowed before a matrix is rejected as
/// non-Hermitian: `max|A - A†| ≤ HERMITICITY_REL · max(1, max|A|)`.
pub const HERMITICITY_REL: f64 = 1e-12;

/// Absolute deviation of the 2-norm from 1 allowed for a state vector
/// that is required to be normalized.
pub const NORMALIZATION_ABS: f64 = 1e-12;

/// Looser normalization check applied to caller-supplied initial states.
pub const INPUT_NORMALIZATION_ABS: f64 = 1e-9;

/// Biorthogonality defect allowed in a spectral decomposition:
/// `|⟨β_j|α_k⟩ - δ_jk| ≤ BIORTHOGONALITY_ABS`.
pub const BIORTHOGONALITY_ABS: f64 = 1e-9;

/// Relative reconstruction error allowed when summing rank-one terms of a
/// spectral decomposition back into the original matrix.
pub const RECONSTRUCTION_REL: f64 = 1e-8;

/// Per-pair eigen residual for Hermitian decompositions,
/// `‖Av - λv‖ ≤ HERMITIAN_RESIDUAL_REL · ‖A‖`.
pub const HERMITIAN_RESIDUAL_REL: f64 = 1e-10;

/// Right-eigenvector matrix condition estimate above which a general
/// matrix is reported as numerically defective.
pub const EIGENVECTOR_CONDITION_LIMIT: f64 = 1e10;

/// Eigenvalues of a Hermitian matrix closer than
/// `CLUSTER_REL · max(1, spectral radius)` form one degenerate cluster.
/// Chain spectra at the sizes treated here have level spacings far above
/// this scale, so clusters capture exact degeneracies only.
pub const CLUSTER_REL: f64 = 1e-9;

/// An eigenvalue of the effective Hamiltonian counts as real when
/// `|Im λ| ≤ REALNESS_REL · max(1, 2g²τ)`; the anti-Hermitian part sets
/// the natural scale.
pub const REALNESS_REL: f64 = 1e-8;

/// Target relative accuracy of the matrix exponential in operator norm.
pub const EXPM_RELATIVE: f64 = 1e-11;

/// Singular-value threshold (relative to the largest singular value)
/// used when extracting the measured-site kernel inside an eigenspace.
/// True kernel directions sit at machine-noise level while the smallest
/// structural singular values stay orders of magnitude above this.
pub const SUBSPACE_KERNEL_TOL: f64 = 1e-8;

/// Spectral norm below which a masked eigenspace block counts as wholly
/// dark (pure rounding noise), making the entire eigenspace part of the
/// kernel.
pub const DARK_CLUSTER_FLOOR: f64 = 1e-10;

/// Projection norm below which a state counts as having no surviving
/// component in the non-decaying subspace.
pub const PROJECTION_FLOOR: f64 = 1e-12;

/// Squared-norm floor under which the protocol reports full decay.
pub const ZERO_NORM_FLOOR: f64 = 1e-300;

/// Step-success probability band for convergence detection:
/// `|1 - p_j| < CONVERGENCE_EPS` counts as a converged step.
pub const CONVERGENCE_EPS: f64 = 1e-10;

/// Number of consecutive converged steps required to stop early.
pub const CONVERGENCE_RUN: usize = 50;

/// Magnitude above which a vector component counts as significant for
/// deterministic tie-breaking and phase fixing.
pub const SIGNIFICANT_COMPONENT: f64 = 1e-6;
