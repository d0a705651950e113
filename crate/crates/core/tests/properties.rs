//! Property tests for the numerical contracts.

use num_complex::Complex64;
use proptest::prelude::*;
use zenochain::model::{Boundary, ChainConfig};
use zenochain::numerics::{self, ComplexMatrix, ComplexVector};
use zenochain::protocol;

fn complex_entries(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
}

fn hermitian_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_entries(dim * dim).prop_map(move |entries| {
        let raw = ComplexMatrix::from_fn(dim, dim, |i, j| {
            let (re, im) = entries[i * dim + j];
            Complex64::new(re, im)
        });
        raw.add(&raw.adjoint()).scaled(Complex64::new(0.5, 0.0))
    })
}

fn general_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_entries(dim * dim).prop_map(move |entries| {
        ComplexMatrix::from_fn(dim, dim, |i, j| {
            let (re, im) = entries[i * dim + j];
            Complex64::new(re, im)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hermitian_eigen_residual_and_reconstruction(a in hermitian_matrix(6)) {
        let eig = numerics::hermitian_eigendecompose(&a).unwrap();
        let norm = a.norm_frobenius().max(1.0);
        let mut reconstruction = ComplexMatrix::zeros(6, 6);
        for (value, vector) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
            // residual per pair
            let mut residual = a.apply(vector);
            residual.add_scaled(Complex64::new(-value, 0.0), vector);
            prop_assert!(residual.norm() <= 1e-10 * norm);
            for i in 0..6 {
                for j in 0..6 {
                    let term = vector.amp(i) * vector.amp(j).conj() * value;
                    reconstruction.add_to_entry(i, j, term);
                }
            }
        }
        prop_assert!(reconstruction.sub(&a).norm_frobenius() <= 1e-8 * norm);
        // orthonormality
        for i in 0..6 {
            for j in 0..6 {
                let overlap = eig.eigenvectors[i].inner(&eig.eigenvectors[j]).norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((overlap - expected).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn general_eigen_is_biorthogonal_and_reconstructs(a in general_matrix(6)) {
        // Generic matrices are diagonalizable; skip the rare rejections.
        let Ok(sd) = numerics::general_eigendecompose(&a) else {
            return Ok(());
        };
        for j in 0..6 {
            for k in 0..6 {
                let overlap = sd.left_vectors[j].inner(&sd.right_vectors[k]);
                let expected = if j == k { Complex64::ONE } else { Complex64::ZERO };
                prop_assert!((overlap - expected).norm() <= 1e-9);
            }
        }
        let mut reconstruction = ComplexMatrix::zeros(6, 6);
        for ((lambda, alpha), beta) in sd
            .eigenvalues
            .iter()
            .zip(&sd.right_vectors)
            .zip(&sd.left_vectors)
        {
            for i in 0..6 {
                for j in 0..6 {
                    reconstruction.add_to_entry(i, j, lambda * alpha.amp(i) * beta.amp(j).conj());
                }
            }
        }
        let norm = a.norm_frobenius().max(1.0);
        prop_assert!(reconstruction.sub(&a).norm_frobenius() <= 1e-8 * norm);
    }

    #[test]
    fn exponential_inverse_roundtrip(a in hermitian_matrix(5), tau in 0.01f64..2.0) {
        let forward = numerics::matrix_exponential(&a, Complex64::new(0.0, -tau)).unwrap();
        let backward = numerics::matrix_exponential(&a, Complex64::new(0.0, tau)).unwrap();
        let product = forward.matmul(&backward);
        prop_assert!(product.sub(&ComplexMatrix::identity(5)).norm_max() <= 1e-9);
        // unitarity of the forward map
        let gram = forward.adjoint().matmul(&forward);
        prop_assert!(gram.sub(&ComplexMatrix::identity(5)).norm_max() <= 1e-10);
    }

    #[test]
    fn kernel_vectors_are_orthonormal_and_null(
        entries in complex_entries(4 * 6),
    ) {
        // rank <= 4 matrix acting on 6 columns: kernel dimension >= 2
        let tall = ComplexMatrix::from_fn(4, 6, |i, j| {
            let (re, im) = entries[i * 6 + j];
            Complex64::new(re, im)
        });
        let basis = numerics::kernel_basis(&tall, 1e-10);
        prop_assert!(basis.len() >= 2);
        let norm = tall.norm_spectral();
        for (i, u) in basis.iter().enumerate() {
            let image_norm = tall.apply(u).norm();
            prop_assert!(image_norm <= 1e-9 * norm.max(1.0));
            for (j, w) in basis.iter().enumerate() {
                let overlap = u.inner(w).norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((overlap - expected).abs() <= 1e-10);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn protocol_contracts_norms_and_survival_is_monotone(
        n in 3usize..=5,
        g in 0.0f64..5.0,
        tau in 0.01f64..0.1,
        seed in 0u64..1000,
    ) {
        let cfg = ChainConfig {
            n_spins: n,
            boundary: Boundary::Periodic,
            coupling_g: g,
            tau,
            steps: 40,
            ..ChainConfig::default()
        };
        let v = protocol::step_operator(&cfg).unwrap();
        let psi = numerics::random_state(cfg.chain_dim(), seed);
        prop_assert!(v.apply(&psi).norm() <= psi.norm() + 1e-10);

        let trajectory = protocol::run_measurement_protocol(&cfg, &psi).unwrap();
        prop_assert!(trajectory.check_invariants().is_ok());

        // A basis state image also contracts.
        let basis = ComplexVector::basis_state(cfg.chain_dim(), seed as usize % cfg.chain_dim());
        prop_assert!(v.apply(&basis).norm() <= 1.0 + 1e-10);
    }
}
