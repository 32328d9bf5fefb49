//! Definitional dense simulator.
//!
//! Builds the exact matrices of the native gates, evolves statevectors and
//! provides the equivalence and leakage checks used to certify every
//! compilation pass. Basis order is lexicographic with qudit 0 as the most
//! significant digit.

mod equiv;
mod gates;
mod matrix;
mod measure;
mod reference;
mod state;

pub use equiv::{
    embedding_isometry, equivalent_on_subspace, leakage, reduced_unitary, Comparison, Equivalence, ReducedUnitary,
    SubspaceIsometry,
};
pub use gates::{
    gate_matrix, involutory_exp, ms_matrix, phase_matrix, physms_matrix, rot_matrix, sigma_phi, sigma_z, zz_matrix,
};
pub use matrix::{Matrix, UnitaryMatrix, C64};
pub use measure::{measurement_distribution, Outcomes};
pub use reference::{apply_qubit_circuit, qubit_circuit_unitary, qubit_gate_matrix};
pub use state::{
    apply_circuit, apply_local, circuit_unitary, Evolution, LocalOp, StateVector, DEFAULT_MAX_UNITARY_DIM,
};

/// Tolerance for equivalence verdicts.
pub const EQUIV_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities between gate matrices.
pub const ALGEBRA_TOL: f64 = 1e-12;
