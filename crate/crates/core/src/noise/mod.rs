//! Phenomenological device noise: a pulse-duration model for two-qubit gates,
//! duration-dependent Pauli errors, readout confusion, idle dephasing and the
//! executors that apply them.

pub mod channel;
pub mod executor;
pub mod pulse;
pub mod readout;
pub mod schedule;
pub mod spec;

pub use channel::{error_channel, noisy_gate_channel};
pub use executor::{run_density, run_trajectories, run_trajectories_in_bases, TrajectoryOptions};
pub use pulse::{pulse_area, rzz_duration, scaled_amplitude, scaled_width, threshold, PulseParams};
pub use readout::{apply_readout_error, ConfusionMatrix, ConfusionMethod};
pub use schedule::{makespan, schedule_idles};
pub use spec::{
    gate_error_rate, IdleNoise, NoiseModel, NoiseSpec, ReadoutNoise, TwoQubitNoise, PRESETS,
};
