//! Algebraic Bethe ansatz for inhomogeneous XXX/XXZ spin-1/2 chains, with
//! exact rational or complex float arithmetic.
//!
//! Builds monodromy and transfer matrices densely, forms Bethe vectors,
//! reconstructs them from subchains, solves the Bethe equations, and checks
//! every result against dense diagonalization.

pub mod bethe;
pub mod chain;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod oracle;
pub mod rmatrix;
pub mod scalar;

pub use bethe::{
    bethe_y, certify_eigenvector, formal_bethe_vector, solve_bethe, tau_eigenvalue,
    transfer_matrix, BetheCertificate, SolverOptions, SpectralSet,
};
pub use chain::{monodromy, partial_monodromy, pseudovacuum, ChainSpec, SiteRange};
pub use decomposition::{
    decomposition_report, homogeneous_coordinate_vector, local_structure_vector,
    multi_component_vector, two_component_vector, Split,
};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use linalg::{Matrix, StateVector};
pub use oracle::{dense_spectrum, match_bethe_to_spectrum, SpectrumReport};
pub use rmatrix::Kernel;
pub use scalar::{Mode, Scalar, Tolerance};
