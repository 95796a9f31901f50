//! Synthesis of preparation circuits for sparse quantum states.
//!
//! Given an `n`-qubit state with `d` nonzero computational-basis amplitudes,
//! this crate compiles an explicit circuit over single-qubit gates and CNOT
//! that maps |0...0> to the state. Two pipelines are provided:
//!
//! * [`sparse::synth_no_ancilla`] works on exactly `n` qubits. It prepares the
//!   amplitudes on the low ceil(log2 d) qubits and then routes them to their
//!   basis strings with a batched permutation circuit.
//! * [`ancilla::synth_with_ancilla`] trades ancilla qubits for depth by
//!   staging the state through a one-hot block encoding that is converted
//!   back to binary block by block.
//!
//! Supporting layers are exposed directly: sparse permutation synthesis
//! ([`perm_synth`]), multi-controlled-X expansion strategies ([`mcx`]),
//! dense low-qubit preparation ([`dense`]), gate-count reports ([`count`]),
//! a dense statevector simulator ([`sim`]), and file formats ([`io`]).

pub mod ancilla;
pub mod convert;
pub mod count;
pub mod dense;
pub mod error;
pub mod gate;
pub mod io;
pub mod mcx;
pub mod perm;
pub mod perm_synth;
pub mod sim;
pub mod sparse;
pub mod state;
pub mod unary;
pub mod wide;

pub use error::{Error, Result};
pub use gate::{BaseGate, Circuit, Control, Gate, Mat2, Register};
pub use state::{SparseStateSpec, StateEntry};
pub use wide::{WideBasis, WideEntry, WideStateSpec};
