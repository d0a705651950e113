//! Dense complex matrices backed by `faer`.

use faer::Mat;
use num_complex::Complex64;

use super::vector::ComplexVector;
use crate::tolerances::HERMITICITY_REL;

/// A dense complex matrix.
///
/// Domain operators are square; rectangular shapes appear in kernel
/// computations where a projector is applied to a set of basis columns.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    mat: Mat<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        assert!(
            nrows >= 1 && ncols >= 1,
            "matrix dimensions must be at least 1"
        );
        Self {
            mat: Mat::zeros(nrows, ncols),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: Mat::identity(dim, dim),
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            mat: Mat::from_fn(nrows, ncols, f),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Self {
        assert!(!columns.is_empty(), "need at least one column");
        let nrows = columns[0].dim();
        assert!(columns.iter().all(|c| c.dim() == nrows), "ragged columns");
        Self::from_fn(nrows, columns.len(), |i, j| columns[j].amp(i))
    }

    pub(crate) fn from_faer(mat: Mat<Complex64>) -> Self {
        Self { mat }
    }

    pub(crate) fn as_faer(&self) -> &Mat<Complex64> {
        &self.mat
    }

    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Square dimension; panics on rectangular matrices.
    pub fn dim(&self) -> usize {
        assert!(self.is_square(), "operation requires a square matrix");
        self.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.mat[(row, col)] = value;
    }

    pub fn add_to_entry(&mut self, row: usize, col: usize, value: Complex64) {
        self.mat[(row, col)] += value;
    }

    pub fn column(&self, col: usize) -> ComplexVector {
        ComplexVector::new((0..self.nrows()).map(|i| self.mat[(i, col)]).collect())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols(), self.nrows(), |i, j| self.mat[(j, i)].conj())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_faer(Mat::from_fn(self.nrows(), self.ncols(), |i, j| {
            self.mat[(i, j)] * factor
        }))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows(), self.ncols()), (other.nrows(), other.ncols()));
        Self::from_faer(&self.mat + &other.mat)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.nrows(), self.ncols()), (other.nrows(), other.ncols()));
        Self::from_faer(&self.mat - &other.mat)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols(), other.nrows(), "matmul dimension mismatch");
        Self::from_faer(&self.mat * &other.mat)
    }

    /// Matrix-vector product `A·x`.
    pub fn apply(&self, x: &ComplexVector) -> ComplexVector {
        assert_eq!(self.ncols(), x.dim(), "matvec dimension mismatch");
        let mut out = vec![Complex64::ZERO; self.nrows()];
        // Column-major accumulation matches the underlying storage.
        for (j, xj) in x.amplitudes().iter().enumerate() {
            let col = self.mat.col(j);
            for (i, out_i) in out.iter_mut().enumerate() {
                *out_i += col[i] * xj;
            }
        }
        ComplexVector::new(out)
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.mat.norm_max()
    }

    /// Frobenius norm.
    pub fn norm_frobenius(&self) -> f64 {
        self.mat.norm_l2()
    }

    /// Operator 1-norm (maximum column absolute sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.ncols())
            .map(|j| {
                (0..self.nrows())
                    .map(|i| self.mat[(i, j)].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Spectral norm (largest singular value).
    pub fn norm_spectral(&self) -> f64 {
        let svd = self.mat.svd().expect("SVD failed");
        let s = svd.S().column_vector();
        if s.nrows() == 0 {
            0.0
        } else {
            s[0].re
        }
    }

    /// Largest Hermiticity defect `max|A - A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                if d > defect {
                    defect = d;
                }
            }
        }
        defect
    }

    /// Hermiticity within the crate-wide relative tolerance.
    pub fn is_hermitian(&self) -> bool {
        self.is_square() && self.hermiticity_defect() <= HERMITICITY_REL * self.norm_max().max(1.0)
    }

    /// Leading principal block of the given size.
    pub fn top_left_block(&self, size: usize) -> Self {
        assert!(size <= self.nrows() && size <= self.ncols());
        Self::from_fn(size, size, |i, j| self.mat[(i, j)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermiticity_check() {
        let mut a = ComplexMatrix::zeros(2, 2);
        a.set(0, 1, Complex64::new(1.0, 2.0));
        a.set(1, 0, Complex64::new(1.0, -2.0));
        assert!(a.is_hermitian());
        a.set(1, 0, Complex64::new(1.0, -2.0 + 1e-6));
        assert!(!a.is_hermitian());
    }

    #[test]
    fn apply_matches_matmul() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64));
        let x = ComplexVector::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.5),
        ]);
        let y = a.apply(&x);
        let xm = ComplexMatrix::from_columns(&[x]);
        let ym = a.matmul(&xm);
        for i in 0..3 {
            assert!((y.amp(i) - ym.get(i, 0)).norm() < 1e-14);
        }
    }

    #[test]
    fn block_extraction() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new((4 * i + j) as f64, 0.0));
        let b = a.top_left_block(2);
        assert_eq!(b.get(1, 1), Complex64::new(5.0, 0.0));
        assert_eq!(b.nrows(), 2);
    }
}
