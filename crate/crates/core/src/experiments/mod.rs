//! Experiment runners behind the `scarsim` command line.

pub mod bench;
pub mod config;
pub mod cy;
pub mod emit;
pub mod oracle;
pub mod qpt;
pub mod runner;
pub mod zbasis;

pub use bench::{bench_angles, run_rzz_bench};
pub use config::{ExperimentConfig, NoiseOverrides, OutputFormat, Regime};
pub use cy::run_cy;
pub use emit::{blob_hash, Manifest, Report, Table};
pub use oracle::{reference, run_oracle, Reference};
pub use qpt::run_qpt;
pub use runner::{
    combine_trials, mean_estimate, reduce, CircuitBatch, Estimate, Observation, Pipeline, Variant,
    VariantRun,
};
pub use zbasis::{run_loschmidt, run_zbasis, run_zpi, ZBasisRun};
