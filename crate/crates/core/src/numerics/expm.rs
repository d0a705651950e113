//! Dense matrix exponential.
//!
//! Two routes are implemented and cross-validated in tests: a spectral
//! route for Hermitian inputs (exact up to eigensolver accuracy, and the
//! one that keeps `exp(-iτH)` unitary to machine level), and order-13
//! Padé approximation with scaling and squaring for general inputs such
//! as the non-Hermitian effective Hamiltonian.

use faer::prelude::Solve;
use faer::Mat;
use num_complex::Complex64;

use super::eigen::{hermitian_eigendecompose_raw, NumericsError};
use super::matrix::ComplexMatrix;

/// Order-13 Padé numerator/denominator coefficients.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm bound under which the order-13 approximant reaches full
/// double-precision accuracy without scaling.
const THETA13: f64 = 5.371920351148152;

/// Computes `exp(scale · A)`.
///
/// Hermitian `A` takes the spectral route for any complex `scale`;
/// everything else goes through Padé scaling-and-squaring.
pub fn matrix_exponential(
    a: &ComplexMatrix,
    scale: Complex64,
) -> Result<ComplexMatrix, NumericsError> {
    if a.is_hermitian() {
        spectral_exponential(a, scale)
    } else {
        Ok(pade_exponential(&a.scaled(scale)))
    }
}

fn spectral_exponential(
    a: &ComplexMatrix,
    scale: Complex64,
) -> Result<ComplexMatrix, NumericsError> {
    // The exponential is invariant under the in-cluster basis choice.
    let eig = hermitian_eigendecompose_raw(a)?;
    let n = a.dim();
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| (scale * lambda).exp())
        .collect();
    let mut out = Mat::<Complex64>::zeros(n, n);
    for (vec, phase) in eig.eigenvectors.iter().zip(&phases) {
        let amps = vec.amplitudes();
        for j in 0..n {
            let w = phase * amps[j].conj();
            if w == Complex64::ZERO {
                continue;
            }
            for i in 0..n {
                out[(i, j)] += amps[i] * w;
            }
        }
    }
    Ok(ComplexMatrix::from_faer(out))
}

/// Order-13 Padé approximant with scaling and squaring.
fn pade_exponential(b: &ComplexMatrix) -> ComplexMatrix {
    let n = b.dim();
    let norm = b.norm_one();
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let factor = Complex64::new(1.0 / 2f64.powi(squarings as i32), 0.0);
    let bs = b.scaled(factor);

    let ident = ComplexMatrix::identity(n);
    let b2 = bs.matmul(&bs);
    let b4 = b2.matmul(&b2);
    let b6 = b2.matmul(&b4);

    let c = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = b6
        .scaled(c(13))
        .add(&b4.scaled(c(11)))
        .add(&b2.scaled(c(9)));
    let u_poly = b6
        .matmul(&u_inner)
        .add(&b6.scaled(c(7)))
        .add(&b4.scaled(c(5)))
        .add(&b2.scaled(c(3)))
        .add(&ident.scaled(c(1)));
    let u = bs.matmul(&u_poly);

    let v_inner = b6
        .scaled(c(12))
        .add(&b4.scaled(c(10)))
        .add(&b2.scaled(c(8)));
    let v = b6
        .matmul(&v_inner)
        .add(&b6.scaled(c(6)))
        .add(&b4.scaled(c(4)))
        .add(&b2.scaled(c(2)))
        .add(&ident.scaled(c(0)));

    // R = (V - U)^{-1} (V + U)
    let lhs = v.sub(&u);
    let rhs = v.add(&u);
    let solved = lhs.as_faer().partial_piv_lu().solve(rhs.as_faer());
    let mut r = ComplexMatrix::from_faer(solved);
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn zero_scale_gives_identity() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| Complex64::new((i + j) as f64, 0.3));
        let e = matrix_exponential(&a, Complex64::ZERO).unwrap();
        let diff = e.sub(&ComplexMatrix::identity(3));
        assert!(diff.norm_max() < 1e-13);
    }

    #[test]
    fn pauli_rotation_identity() {
        // exp(-i (π/2) X) = -i X
        let x = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        });
        let e = matrix_exponential(&x, Complex64::new(0.0, -FRAC_PI_2)).unwrap();
        let expected = x.scaled(Complex64::new(0.0, -1.0));
        assert!(e.sub(&expected).norm_max() < 1e-13);
    }

    #[test]
    fn pade_matches_spectral_on_hermitian_input() {
        let dim = 24;
        let herm = ComplexMatrix::from_fn(dim, dim, |i, j| {
            let re = ((i * 31 + j * 17) % 11) as f64 / 11.0;
            let im = (i as f64 - j as f64) * 0.21;
            if i == j {
                Complex64::new(i as f64 / 3.0, 0.0)
            } else if i < j {
                Complex64::new(re, im)
            } else {
                Complex64::new(
                    ((j * 31 + i * 17) % 11) as f64 / 11.0,
                    (i as f64 - j as f64) * 0.21,
                )
            }
        });
        // Symmetrize explicitly.
        let herm = herm.add(&herm.adjoint()).scaled(Complex64::new(0.5, 0.0));
        let scale = Complex64::new(0.0, -0.37);
        let spectral = matrix_exponential(&herm, scale).unwrap();
        let pade = super::pade_exponential(&herm.scaled(scale));
        let rel = spectral.sub(&pade).norm_spectral() / spectral.norm_spectral();
        assert!(rel < 1e-11, "route disagreement {rel:e}");
    }

    #[test]
    fn unitary_inverse_roundtrip() {
        let dim = 8;
        let herm = ComplexMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::new((i as f64).sin(), 0.0)
            } else {
                Complex64::new(
                    0.2 / (1.0 + (i as f64 - j as f64).abs()),
                    0.1 * (i as f64 - j as f64),
                )
            }
        });
        let herm = herm.add(&herm.adjoint()).scaled(Complex64::new(0.5, 0.0));
        let tau = 0.42;
        let forward = matrix_exponential(&herm, Complex64::new(0.0, -tau)).unwrap();
        let backward = matrix_exponential(&herm, Complex64::new(0.0, tau)).unwrap();
        let product = forward.matmul(&backward);
        assert!(product.sub(&ComplexMatrix::identity(dim)).norm_max() < 1e-9);
    }

    #[test]
    fn scaling_and_squaring_kicks_in_for_large_norms() {
        // exp(i π Z) = -I, scaled up so ‖B‖ exceeds θ13.
        let z = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 7.0 } else { -7.0 }, 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let e = super::pade_exponential(&z.scaled(Complex64::new(0.0, PI)));
        let expected = ComplexMatrix::identity(2).scaled(Complex64::new(-1.0, 0.0));
        assert!(e.sub(&expected).norm_max() < 1e-10);
    }
}
