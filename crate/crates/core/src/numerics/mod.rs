//! Dense complex linear algebra: eigendecompositions, matrix exponential,
//! kernel extraction, and seeded Haar sampling.
//!
//! All functions here are pure over immutable inputs and reproducible for
//! a fixed input (and seed, where one applies).

mod eigen;
mod expm;
mod kernel;
mod matrix;
mod random;
mod vector;

pub(crate) use eigen::hermitian_eigendecompose_raw;
pub use eigen::{
    eigenvalue_clusters, general_eigendecompose, hermitian_eigendecompose, HermitianEigen,
    NumericsError, SpectralDecomposition,
};
pub use expm::matrix_exponential;
pub use kernel::kernel_basis;
pub use matrix::ComplexMatrix;
pub use random::{derive_stream_seed, random_state};
pub use vector::ComplexVector;
