//! Compilation of qubit-level circuits onto the native gate set of a
//! trapped-ion qudit processor.
//!
//! Two backends are provided:
//!
//! * [`qutrit`]: one qubit per qutrit, using level `|2>` as an ancilla to build
//!   multi-controlled X gates from a linear ladder of two-qutrit MS gates.
//! * [`ququart`]: two qubits per ququart, with intra-ion CZ as a single phase
//!   gate and inter-ion CZ as a single ZZ interaction.
//!
//! Every pass is checked against the definitional dense simulator in [`sim`],
//! and [`verify`] packages those checks into verdicts and reports.

pub mod error;
pub mod ir;
pub mod physical;
pub mod ququart;
pub mod qutrit;
pub mod random;
pub mod sim;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
pub use ir::{CompilationReport, EmbeddingMap, Lowered, QubitCircuit, QubitGate, QuditCircuit, QuditGate, Slot};
