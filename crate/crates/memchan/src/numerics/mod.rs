//! Dense complex linear algebra and information-theoretic primitives.

mod dist;
mod matrix;
mod state;

pub use dist::ProbabilityDistribution;
pub use matrix::{
    all_finite, c64, hermitian_eigen, hermitian_eigenvalues, hermiticity_defect, identity, kron,
    max_abs_diff, ComplexMatrix,
};
pub use state::{
    partial_trace, reduced_from_state, trace_distance, trace_norm_distance, von_neumann_entropy,
    DensityMatrix, StateVector,
};
