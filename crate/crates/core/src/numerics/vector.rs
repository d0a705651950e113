//! Dense complex vectors over the computational basis.

use num_complex::Complex64;

use crate::tolerances::NORMALIZATION_ABS;

/// A dense complex amplitude vector.
///
/// Quantum states are represented as normalized `ComplexVector`s; the
/// type itself does not enforce normalization so that intermediate
/// (contracted, unnormalized) vectors can use the same operations.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    amps: Vec<Complex64>,
}

impl ComplexVector {
    /// Wraps raw amplitudes. Panics on an empty vector.
    pub fn new(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "vector dimension must be at least 1");
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::ZERO; dim])
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Squared overlap `|⟨self|other⟩|²` between two normalized states.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.amps.iter().map(|a| a * factor).collect())
    }

    /// In-place `self += factor · other`.
    pub fn add_scaled(&mut self, factor: Complex64, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "axpy dimension mismatch");
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
    }

    /// Returns the unit-norm copy, or `None` when the norm underflows.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n < f64::MIN_POSITIVE {
            return None;
        }
        Some(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Strict normalization per the internal contract.
    pub fn is_unit(&self) -> bool {
        self.is_normalized(NORMALIZATION_ABS)
    }

    /// Tensor product `|self⟩ ⊗ |other⟩` with `other` occupying the low bits.
    ///
    /// Index layout: `index = self_index · other_dim + other_index`, so a
    /// state tensored on the right varies fastest.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::new(amps)
    }
}
