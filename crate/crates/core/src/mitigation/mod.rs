//! Error mitigation: twirling, folding and extrapolation, readout inversion,
//! postselection and dynamical decoupling.

pub mod dd;
pub mod fold;
pub mod manifest;
pub mod postselect;
pub mod readout;
pub mod twirl;
pub mod zne;

pub use dd::insert_dd;
pub use fold::{
    effective_scale, fold_count, fold_gates_count, fold_gates_random, prefix_fold_counts, ZneConfig,
};
pub use manifest::{read_jsonl, write_jsonl, BatchEntry};
pub use postselect::{postselect, Postselected};
pub use readout::{
    calibrate_confusion, clip_quasi, mitigate_readout, ReadoutMitigator, ReadoutMode,
};
pub use twirl::{
    assignment_for, dress, twirl_circuit, twirl_circuit_with, twirl_cnot, twirl_rotation,
    twirl_rzz, twirled_error_channel, TwirlAssignment,
};
pub use zne::{group_means, zne_extrapolate, zne_from_samples, ZnePoint, ZneResult};
