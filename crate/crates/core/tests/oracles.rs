//! Independent-oracle checks: brute-force references computed here, in
//! test code only, and compared against the library implementations.

use num_complex::Complex64;
use zenochain::model::{self, Boundary, ChainConfig};
use zenochain::numerics::{self, ComplexMatrix, ComplexVector};
use zenochain::{protocol, subspace};

fn default_chain() -> ChainConfig {
    ChainConfig::default()
}

/// Plain Taylor summation of `exp(B)`; converges quickly for the small
/// step generators used here.
fn taylor_exponential(b: &ComplexMatrix, terms: usize) -> ComplexMatrix {
    let dim = b.dim();
    let mut result = ComplexMatrix::identity(dim);
    let mut power = ComplexMatrix::identity(dim);
    for k in 1..=terms {
        power = power.matmul(b).scaled(Complex64::new(1.0 / k as f64, 0.0));
        result = result.add(&power);
    }
    result
}

#[test]
fn effective_step_exponential_matches_taylor_and_is_contractive() {
    let cfg = default_chain();
    let h_eff = model::build_effective_hamiltonian(&cfg).unwrap();
    let scale = Complex64::new(0.0, -cfg.tau);

    let exponential = numerics::matrix_exponential(&h_eff, scale).unwrap();
    let oracle = taylor_exponential(&h_eff.scaled(scale), 60);

    let rel = exponential.sub(&oracle).norm_spectral() / oracle.norm_spectral();
    assert!(rel < 1e-12, "Taylor oracle disagreement {rel:e}");
    // Imaginary spectrum of the generator is nonpositive, so the
    // propagator cannot expand any state.
    assert!(exponential.norm_spectral() <= 1.0 + 1e-10);
}

#[test]
fn step_operator_deviation_is_third_order_in_tau() {
    let base = ChainConfig {
        coupling_g: 4.0,
        tau: 0.03,
        ..default_chain()
    };
    let deviation = |tau: f64| -> f64 {
        let cfg = ChainConfig {
            tau,
            ..base.clone()
        };
        let v = protocol::step_operator(&cfg).unwrap();
        let h_eff = model::build_effective_hamiltonian(&cfg).unwrap();
        let e = numerics::matrix_exponential(&h_eff, Complex64::new(0.0, -tau)).unwrap();
        v.sub(&e).norm_spectral()
    };
    let d1 = deviation(base.tau);
    let d2 = deviation(base.tau / 2.0);
    let d4 = deviation(base.tau / 4.0);
    let first = d1 / d2;
    let second = d2 / d4;
    assert!((6.0..=10.0).contains(&first), "first halving ratio {first}");
    assert!(
        (6.0..=10.0).contains(&second),
        "second halving ratio {second}"
    );
}

#[test]
fn ground_eigenspace_has_no_dark_component() {
    // Explicit rank computation: the ground state of the six-site ring
    // keeps a finite measured-site weight, so its one-dimensional
    // eigenspace contributes nothing to the kernel.
    let cfg = default_chain();
    let eigen = model::chain_eigenbasis(&cfg).unwrap();
    let ground = &eigen.eigenvectors[0];
    let pi = model::build_projector_pi(&cfg).unwrap();
    let masked_norm = pi.apply(ground).norm();
    assert!(masked_norm > 0.1, "ground state nearly dark: {masked_norm}");

    let masked = ComplexMatrix::from_columns(&[pi.apply(ground)]);
    assert!(numerics::kernel_basis(&masked, 1e-8).is_empty());
}

#[test]
fn haar_states_have_unbiased_magnetization() {
    let dim = 64;
    let samples = 10_000usize;
    let n_sites = 6;
    let mut sums = vec![0.0f64; n_sites];
    let mut sq_sums = vec![0.0f64; n_sites];
    for index in 0..samples {
        let seed = numerics::derive_stream_seed(97, index as u64);
        let state = numerics::random_state(dim, seed);
        for site in 1..=n_sites {
            let z = model::site_magnetization(&state, site).unwrap();
            sums[site - 1] += z;
            sq_sums[site - 1] += z * z;
        }
    }
    for site in 0..n_sites {
        let mean = sums[site] / samples as f64;
        let variance = sq_sums[site] / samples as f64 - mean * mean;
        let stderr = (variance / samples as f64).sqrt();
        assert!(
            mean.abs() <= 3.0 * stderr,
            "site {} biased: mean {mean} vs stderr {stderr}",
            site + 1
        );
        // The per-state spread itself is at the 1/sqrt(dim) scale.
        assert!(variance.sqrt() < 3.0 / (dim as f64).sqrt());
    }
}

#[test]
fn dark_eigenvectors_give_total_hamiltonian_eigenstates() {
    for n in [4usize, 6] {
        let cfg = ChainConfig {
            n_spins: n,
            ..default_chain()
        };
        let report = subspace::build_nondecaying_basis(&cfg).unwrap();
        let h_total = model::build_total_hamiltonian(&cfg).unwrap();
        let probe_up = ComplexVector::basis_state(2, 0);
        for (vector, &energy) in report.nd_basis.iter().zip(&report.energies) {
            let joint = probe_up.tensor(vector);
            let mut residual = h_total.apply(&joint);
            residual.add_scaled(Complex64::new(-energy, 0.0), &joint);
            assert!(
                residual.norm() <= 1e-10 * h_total.norm_frobenius().max(1.0),
                "N={n}: dark state is not a joint eigenstate"
            );
        }
    }
}

#[test]
fn step_operator_restricted_to_dark_space_is_a_pure_phase() {
    let cfg = default_chain();
    let report = subspace::build_nondecaying_basis(&cfg).unwrap();
    let v = protocol::step_operator(&cfg).unwrap();
    for (vector, &energy) in report.nd_basis.iter().zip(&report.energies) {
        let image = v.apply(vector);
        let phase = vector.inner(&image);
        assert!(
            (phase.norm() - 1.0).abs() <= 1e-9,
            "norm lost: {}",
            phase.norm()
        );
        let expected = Complex64::new(0.0, -energy * cfg.tau).exp();
        assert!(
            (phase - expected).norm() <= 1e-9,
            "wrong phase at E={energy}"
        );
        let mut residual = image.clone();
        residual.add_scaled(-phase, vector);
        assert!(residual.norm() <= 1e-9);
    }
}

#[test]
fn commutators_with_total_magnetization_vanish() {
    // Explicit commutator matrices against the diagonal generator of the
    // conserved total magnetization.
    for (n, boundary) in [(5usize, Boundary::Periodic), (6, Boundary::Open)] {
        let cfg = ChainConfig {
            n_spins: n,
            boundary,
            ..default_chain()
        };
        let dim = cfg.chain_dim();
        let z_total = ComplexMatrix::from_fn(dim, dim, |i, j| {
            if i != j {
                Complex64::ZERO
            } else {
                let downs = i.count_ones() as f64;
                Complex64::new(n as f64 - 2.0 * downs, 0.0)
            }
        });
        for matrix in [
            model::build_chain_hamiltonian(&cfg).unwrap(),
            model::build_effective_hamiltonian(&cfg).unwrap(),
        ] {
            let commutator = matrix.matmul(&z_total).sub(&z_total.matmul(&matrix));
            assert!(
                commutator.norm_frobenius() <= 1e-12 * matrix.norm_frobenius().max(1.0),
                "N={n} {boundary:?}: magnetization not conserved"
            );
        }
    }

    // Including the probe on the joint space.
    let cfg = default_chain();
    let dim = cfg.total_dim();
    let z_with_probe = ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            Complex64::ZERO
        } else {
            let downs = i.count_ones() as f64;
            Complex64::new((cfg.n_spins + 1) as f64 - 2.0 * downs, 0.0)
        }
    });
    let h_total = model::build_total_hamiltonian(&cfg).unwrap();
    let commutator = h_total
        .matmul(&z_with_probe)
        .sub(&z_with_probe.matmul(&h_total));
    assert!(commutator.norm_frobenius() <= 1e-12 * h_total.norm_frobenius());
}

#[test]
fn effective_spectrum_stays_in_the_field_strip() {
    let cfg = default_chain();
    let classification = subspace::classify_spectrum(&cfg).unwrap();
    let strip = cfg.field_strength();
    for lambda in &classification.eigenvalues {
        assert!(
            lambda.im <= 1e-10,
            "eigenvalue above the real axis: {lambda}"
        );
        assert!(
            lambda.im >= -strip - 1e-9,
            "eigenvalue below the strip: {lambda}"
        );
    }
}

#[test]
fn survival_converges_to_dark_projection_for_generic_states() {
    let cfg = ChainConfig {
        n_spins: 5,
        coupling_g: 2.0,
        ..default_chain()
    };
    let report = subspace::build_nondecaying_basis(&cfg).unwrap();
    for seed in [3u64, 17] {
        let psi0 = numerics::random_state(cfg.chain_dim(), seed);
        let predicted = subspace::predicted_survival(&psi0, &report);
        let (_, info) = protocol::run_until_converged(&cfg, &psi0, 100_000).unwrap();
        assert!(info.converged);
        assert!(
            (info.survival_at_stop - predicted).abs() <= 1e-3,
            "seed {seed}: {} vs {predicted}",
            info.survival_at_stop
        );
    }
}

#[test]
fn dimension_is_independent_of_coupling_and_interval() {
    let mut dims = std::collections::HashSet::new();
    for g in [0.5, 1.0, 4.0] {
        for tau in [0.01, 0.03, 0.1] {
            let cfg = ChainConfig {
                coupling_g: g,
                tau,
                ..default_chain()
            };
            dims.insert(
                subspace::build_nondecaying_basis(&cfg)
                    .unwrap()
                    .nd_dimension,
            );
        }
    }
    assert_eq!(dims.len(), 1);
    assert!(dims.contains(&6));
}
