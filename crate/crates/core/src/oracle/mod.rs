//! Brute-force reference computations in a truncated two-mode Fock space.

mod density;
mod truncation;
mod verify;

pub use density::{
    expectations, partial_trace, purity, von_neumann_entropy, Block, DensityMatrix, Expectations, FockLabel,
    Subsystem, EIGEN_CLAMP, HERMITIAN_TOL,
};
pub use truncation::{
    choose_truncation, choose_truncation_with_budget, geometric_tail, TruncationSpec, DEFAULT_ENTRY_BUDGET,
};
pub use verify::{verify_point, VerificationRecord};
