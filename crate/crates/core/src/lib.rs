//! Exact-diagonalization toolkit for measurement-driven non-unitary
//! dynamics of a spin-1/2 chain with in-plane exchange coupling.
//!
//! A probe spin attached to one chain site is evolved jointly with the
//! chain and repeatedly post-selected in its up state. The surviving
//! chain dynamics is a contraction generated, to third order in the
//! measurement interval, by a non-Hermitian Hamiltonian with a local
//! imaginary field on the probed site. This crate builds all the
//! operators involved, runs the discrete protocol and its continuous
//! counterpart, classifies the Hilbert space into decaying and
//! non-decaying subspaces, and predicts survival probabilities.
//!
//! Modules:
//! - [`numerics`] — dense complex eigendecompositions, matrix
//!   exponential, kernel extraction, seeded Haar sampling;
//! - [`model`] — basis conventions and operator builders;
//! - [`protocol`] — the evolution-measurement loop, effective evolution,
//!   mixtures, and discrete-versus-continuous comparison;
//! - [`subspace`] — non-decaying basis construction, dimension scans,
//!   spectrum classification, survival prediction;
//! - [`tolerances`] — every numerical threshold, in one place.
//!
//! Dimensionless units: the chain exchange sets the energy scale, so
//! times are measured in its inverse. Haar sampling is used wherever
//! random initial states are called for.

pub mod model;
pub mod numerics;
pub mod protocol;
pub mod subspace;
pub mod tolerances;

pub use model::{Boundary, ChainConfig, ModelError, Spin};
pub use numerics::{
    ComplexMatrix, ComplexVector, HermitianEigen, NumericsError, SpectralDecomposition,
};
pub use protocol::{
    ConvergenceInfo, DeviationReport, MixedState, ProtocolEngine, ProtocolError, Trajectory,
};
pub use subspace::{
    AverageSurvival, ScanEntry, SpectrumClassification, SubspaceError, SubspaceReport,
};
