//! Dense statevector simulation and small-system channel algebra.
//!
//! Qubit `q` of a width-`n` register occupies bit `n - 1 - q` of a basis
//! index, so the binary expansion of the index read most-significant first
//! is the measured bitstring (character `k` = qubit `k` = site `k + 1`).

pub mod circuit;
pub mod counts;
pub mod dense;
pub mod density;
pub mod gate;
pub mod pauli;
pub mod state;

pub use circuit::{Circuit, IdleInterval};
pub use counts::{exact_counts, sample_counts, Counts, Shots};
pub use dense::CMatrix;
pub use density::{
    apply_channel, is_pauli_stochastic, max_off_diagonal, pauli_transfer_matrix, DensityOperator,
    KrausChannel,
};
pub use gate::{Gate, GateKind};
pub use pauli::{Pauli, PauliString};
pub use state::{apply_gate, expectation_pauli, run_circuit, Statevector};

/// Largest register the dense statevector accepts.
pub const MAX_WIDTH: usize = 24;

#[inline]
pub(crate) fn bit_mask(width: usize, qubit: usize) -> usize {
    1usize << (width - 1 - qubit)
}
