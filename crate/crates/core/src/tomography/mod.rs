//! Two-qubit process tomography and the SPAM-free error rate from folded
//! gate sequences.

pub mod qpt;
pub mod slope;

pub use qpt::{qpt_reconstruct, qpt_reconstruct_gate, QptResult, MEASUREMENT_BASES, PREPARATIONS};
pub use slope::{fold_sequence, spam_free_error, FidelityPoint, FidelitySlope, SlopeReport};
