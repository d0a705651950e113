//! Hermitian and general (biorthogonal) eigendecompositions.

use faer::prelude::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::vector::ComplexVector;
use crate::tolerances::{
    CLUSTER_REL, EIGENVECTOR_CONDITION_LIMIT, HERMITICITY_REL, SIGNIFICANT_COMPONENT,
};

/// Errors raised by the dense linear-algebra layer.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum NumericsError {
    /// The input was not Hermitian within tolerance.
    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds tolerance {tolerance:.3e})")]
    NotHermitian { defect: f64, tolerance: f64 },
    /// The right-eigenvector matrix is too ill-conditioned for a
    /// trustworthy biorthogonal decomposition.
    #[error("matrix is numerically defective (eigenvector condition estimate {condition:.3e})")]
    Defective { condition: f64 },
    /// The underlying solver failed to converge.
    #[error("eigensolver failed to converge")]
    ConvergenceFailure,
}

/// Orthonormal eigensystem of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, matching `eigenvalues` by index.
    pub eigenvectors: Vec<ComplexVector>,
}

impl HermitianEigen {
    /// Ranges of indices whose eigenvalues form one degenerate cluster.
    pub fn clusters(&self) -> Vec<std::ops::Range<usize>> {
        eigenvalue_clusters(&self.eigenvalues)
    }
}

/// Biorthogonal eigensystem of a general (possibly non-Hermitian) matrix:
/// `A·α_j = λ_j·α_j`, `A†·β_j = λ_j*·β_j`, `⟨β_j|α_k⟩ = δ_jk`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Eigenvalues sorted by (real part, then imaginary part) ascending.
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm right eigenvectors.
    pub right_vectors: Vec<ComplexVector>,
    /// Left eigenvectors scaled for biorthonormality against the right family.
    pub left_vectors: Vec<ComplexVector>,
    /// 1-norm condition estimate of the right-eigenvector matrix.
    pub condition_estimate: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Expansion coefficients `⟨β_j|ψ⟩` of a state in the right basis.
    pub fn coefficients(&self, state: &ComplexVector) -> Vec<Complex64> {
        self.left_vectors.iter().map(|b| b.inner(state)).collect()
    }
}

/// Groups sorted eigenvalues into numerically degenerate clusters.
///
/// Two consecutive eigenvalues belong to the same cluster when their gap
/// is at most `CLUSTER_REL · max(1, spectral radius)`.
pub fn eigenvalue_clusters(sorted: &[f64]) -> Vec<std::ops::Range<usize>> {
    let radius = sorted
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let tol = CLUSTER_REL * radius;
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..sorted.len() {
        if sorted[i] - sorted[i - 1] > tol {
            clusters.push(start..i);
            start = i;
        }
    }
    if !sorted.is_empty() {
        clusters.push(start..sorted.len());
    }
    clusters
}

/// Index of the first component with magnitude above the significance
/// threshold (falls back to the largest component).
fn first_significant(amps: &[Complex64]) -> usize {
    amps.iter()
        .position(|a| a.norm() > SIGNIFICANT_COMPONENT)
        .unwrap_or_else(|| {
            amps.iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| a.norm().total_cmp(&b.norm()))
                .map(|(i, _)| i)
                .unwrap_or(0)
        })
}

/// Rotates a vector's global phase so its first significant component is
/// real and positive.
fn canonicalize_phase(v: &mut ComplexVector) {
    let k = first_significant(v.amplitudes());
    let pivot = v.amp(k);
    if pivot.norm() == 0.0 {
        return;
    }
    let phase = pivot.conj() / Complex64::new(pivot.norm(), 0.0);
    for a in v.amplitudes_mut() {
        *a *= phase;
    }
}

/// Seed of the fixed generic rotation applied inside every degenerate
/// cluster. Part of the eigenbasis convention: the rotation keeps
/// degenerate representatives in generic position (no accidental
/// alignment with structured directions) and makes them independent of
/// the underlying solver.
const CLUSTER_ROTATION_SEED: u64 = 242;

/// Deterministic orthonormal basis of a degenerate eigenspace, built only
/// from the span itself (hence independent of the solver's arbitrary
/// in-cluster choice): computational basis vectors are projected into the
/// span (candidates by descending projector diagonal, ties by ascending
/// index) and orthonormalized via QR with a positive-diagonal phase
/// convention, which coincides with Gram-Schmidt.
fn canonical_cluster_basis(members: &[ComplexVector]) -> Mat<Complex64> {
    let dim = members[0].dim();
    let size = members.len();
    let v = Mat::<Complex64>::from_fn(dim, size, |i, l| members[l].amp(i));

    let mut weights: Vec<(f64, usize)> = (0..dim)
        .map(|i| {
            let w: f64 = (0..size).map(|l| v[(i, l)].norm_sqr()).sum();
            (w, i)
        })
        .collect();
    weights.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    // Fast path: QR of the projections of the `size` heaviest candidates.
    let selected: Vec<usize> = weights.iter().take(size).map(|&(_, i)| i).collect();
    // coords[l, c] = ⟨v_l | e_{selected[c]}⟩, so the projected candidates
    // are V · coords.
    let coords = Mat::<Complex64>::from_fn(size, size, |l, c| v[(selected[c], l)].conj());
    let projected = &v * &coords;
    let qr = projected.qr();
    let r = qr.R();
    if (0..size).all(|j| r[(j, j)].norm() > 1e-8) {
        let q = qr.compute_thin_Q();
        let mut basis = Mat::<Complex64>::zeros(dim, size);
        for j in 0..size {
            let diag = r[(j, j)];
            let phase = diag / Complex64::new(diag.norm(), 0.0);
            for i in 0..dim {
                basis[(i, j)] = q[(i, j)] * phase;
            }
        }
        return basis;
    }

    // Rare fallback: greedy Gram-Schmidt over the full candidate list,
    // skipping near-dependent projections.
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(size);
    for &(weight, index) in &weights {
        if basis.len() == size || weight < 1e-12 {
            break;
        }
        let mut w = ComplexVector::zeros(dim);
        for l in 0..size {
            w.add_scaled(v[(index, l)].conj(), &members[l]);
        }
        for b in &basis {
            let overlap = b.inner(&w);
            w.add_scaled(-overlap, b);
        }
        let norm = w.norm();
        if norm > 1e-6 {
            basis.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
    assert_eq!(
        basis.len(),
        size,
        "failed to recover degenerate eigenspace span"
    );
    Mat::<Complex64>::from_fn(dim, size, |i, j| basis[j].amp(i))
}

/// Fixed orthogonal `size × size` rotation from a seeded Gaussian matrix
/// orthonormalized column by column.
fn generic_rotation(size: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut columns: Vec<Vec<f64>> = (0..size)
        .map(|_| {
            (0..size)
                .map(|_| super::random::standard_gaussian(&mut rng))
                .collect()
        })
        .collect();
    for j in 0..size {
        for k in 0..j {
            let overlap: f64 = (0..size).map(|i| columns[k][i] * columns[j][i]).sum();
            let (head, tail) = columns.split_at_mut(j);
            for (target, source) in tail[0].iter_mut().zip(&head[k]) {
                *target -= overlap * source;
            }
        }
        let norm: f64 = columns[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "degenerate rotation draw");
        for entry in &mut columns[j] {
            *entry /= norm;
        }
    }
    columns
}

/// Replaces the solver's arbitrary degenerate-cluster vectors by the
/// crate's canonical convention: canonical span basis, fixed generic
/// rotation (decorrelated across clusters through the cluster position),
/// phase fixing.
fn canonicalize_cluster(members: &mut [ComplexVector], cluster_start: usize) {
    let size = members.len();
    let dim = members[0].dim();
    let basis = canonical_cluster_basis(members);
    let stream = super::random::derive_stream_seed(
        CLUSTER_ROTATION_SEED,
        (cluster_start as u64) << 16 | size as u64,
    );
    let rotation = generic_rotation(size, stream);
    let q = Mat::<Complex64>::from_fn(size, size, |k, l| Complex64::new(rotation[l][k], 0.0));
    let rotated = &basis * &q;
    for slot in 0..size {
        let mut v = ComplexVector::new((0..dim).map(|i| rotated[(i, slot)]).collect());
        canonicalize_phase(&mut v);
        members[slot] = v;
    }
}

/// Sorted eigensystem straight from the solver, with per-vector phase
/// fixing only. Sufficient wherever results are invariant under the
/// in-cluster basis choice (spectral functions, kernel spans).
pub(crate) fn hermitian_eigendecompose_raw(
    a: &ComplexMatrix,
) -> Result<HermitianEigen, NumericsError> {
    let defect = a.hermiticity_defect();
    let tolerance = HERMITICITY_REL * a.norm_max().max(1.0);
    if defect > tolerance {
        return Err(NumericsError::NotHermitian { defect, tolerance });
    }
    let evd = a
        .as_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| NumericsError::ConvergenceFailure)?;
    let n = a.dim();
    let s = evd.S().column_vector();
    let u = evd.U();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].re.total_cmp(&s[j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| s[i].re).collect();
    let eigenvectors: Vec<ComplexVector> = order
        .iter()
        .map(|&col| {
            let mut v = ComplexVector::new((0..n).map(|i| u[(i, col)]).collect());
            canonicalize_phase(&mut v);
            v
        })
        .collect();
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Full orthonormal eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Degenerate clusters are replaced by
/// the crate's canonical solver-independent basis, then ordered by
/// descending magnitude of their first significant component (ties by
/// index), which makes the output deterministic for a fixed input.
pub fn hermitian_eigendecompose(a: &ComplexMatrix) -> Result<HermitianEigen, NumericsError> {
    let HermitianEigen {
        eigenvalues,
        mut eigenvectors,
    } = hermitian_eigendecompose_raw(a)?;

    for cluster in eigenvalue_clusters(&eigenvalues) {
        if cluster.len() < 2 {
            continue;
        }
        let mut members: Vec<ComplexVector> = eigenvectors[cluster.clone()].to_vec();
        canonicalize_cluster(&mut members, cluster.start);
        let mut keys: Vec<(usize, f64)> = members
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.amp(first_significant(v.amplitudes())).norm()))
            .collect();
        keys.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for (slot, (src, _)) in keys.iter().enumerate() {
            eigenvectors[cluster.start + slot] =
                std::mem::replace(&mut members[*src], ComplexVector::zeros(1));
        }
    }

    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Biorthogonal eigendecomposition of a general square matrix.
///
/// Right eigenvectors are normalized to unit length; left eigenvectors are
/// the conjugated rows of the inverse right-eigenvector matrix, so the two
/// families are biorthonormal by construction. Reports `Defective` when
/// the right-eigenvector matrix condition estimate exceeds the crate
/// limit (a near-Jordan input).
pub fn general_eigendecompose(a: &ComplexMatrix) -> Result<SpectralDecomposition, NumericsError> {
    let n = a.dim();
    let eig = a.as_faer().eigen().map_err(|_| NumericsError::Defective {
        condition: f64::INFINITY,
    })?;
    let s = eig.S().column_vector();
    let u_raw = eig.U();

    // Normalize right-eigenvector columns.
    let mut u = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        let col_norm: f64 = (0..n).map(|i| u_raw[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if col_norm < f64::MIN_POSITIVE {
            return Err(NumericsError::Defective {
                condition: f64::INFINITY,
            });
        }
        let inv = Complex64::new(1.0 / col_norm, 0.0);
        for i in 0..n {
            u[(i, j)] = u_raw[(i, j)] * inv;
        }
    }

    let w = u.full_piv_lu().solve(Mat::<Complex64>::identity(n, n));
    let norm_one = |m: &Mat<Complex64>| -> f64 {
        (0..m.ncols())
            .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let condition = norm_one(&u) * norm_one(&w);
    if !condition.is_finite() || condition > EIGENVECTOR_CONDITION_LIMIT {
        return Err(NumericsError::Defective { condition });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        s[i].re
            .total_cmp(&s[j].re)
            .then(s[i].im.total_cmp(&s[j].im))
    });

    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| s[i]).collect();
    let right_vectors: Vec<ComplexVector> = order
        .iter()
        .map(|&j| ComplexVector::new((0..n).map(|i| u[(i, j)]).collect()))
        .collect();
    let left_vectors: Vec<ComplexVector> = order
        .iter()
        .map(|&j| ComplexVector::new((0..n).map(|i| w[(j, i)].conj()).collect()))
        .collect();

    Ok(SpectralDecomposition {
        eigenvalues,
        right_vectors,
        left_vectors,
        condition_estimate: condition,
    })
}
