//! Numerical kernel (null-space) extraction via singular-value thresholding.

use super::matrix::ComplexMatrix;
use super::vector::ComplexVector;

/// Orthonormal basis of `{v : ‖Av‖ ≤ tol·‖A‖·‖v‖}`.
///
/// Right singular vectors whose singular value falls at or below
/// `tol · σ_max` are returned, ordered by ascending singular value.
/// A zero matrix yields the full space; an empty result is valid.
pub fn kernel_basis(a: &ComplexMatrix, tol: f64) -> Vec<ComplexVector> {
    assert!(tol > 0.0, "kernel tolerance must be positive");
    let ncols = a.ncols();
    let svd = a.as_faer().svd().expect("SVD failed");
    let s = svd.S().column_vector();
    let v = svd.V();
    let n_sv = s.nrows();
    let sigma_max = if n_sv == 0 { 0.0 } else { s[0].re };
    let threshold = tol * sigma_max;

    let mut kept: Vec<(f64, usize)> = (0..ncols)
        .filter_map(|j| {
            let sigma = if j < n_sv { s[j].re } else { 0.0 };
            (sigma <= threshold).then_some((sigma, j))
        })
        .collect();
    kept.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    kept.into_iter()
        .map(|(_, j)| ComplexVector::new((0..ncols).map(|i| v[(i, j)]).collect()))
        .collect()
}
