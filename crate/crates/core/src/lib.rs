//! Digital simulation workbench for quantum many-body scars in the
//! mixed-field Ising chain.
//!
//! The crate covers the full pipeline of a Trotterized scar experiment:
//!
//! - [`qsim`]: dense statevector execution, shot sampling and small-system
//!   channel algebra (density operators, Kraus channels, Pauli transfer
//!   matrices).
//! - [`model`]: the Hamiltonian, the Trotter-step circuit, Néel states, the
//!   Fibonacci (no adjacent excitations) subspace and an exact-diagonalization
//!   oracle.
//! - [`noise`]: pulse-duration model for two-CNOT and scaled cross-resonance
//!   `R_ZZ` gates, duration-dependent Pauli errors, readout confusion and idle
//!   dephasing, plus trajectory and density-matrix executors.
//! - [`mitigation`]: Pauli twirling (including the angle-flip twirl for
//!   `R_ZZ`), random gate folding with linear zero-noise extrapolation,
//!   readout inversion, postselection and dynamical decoupling.
//! - [`observables`]: staggered magnetization, Loschmidt echo, accumulated
//!   error and the ancilla-free connected correlator `C_Y(t)`.
//! - [`tomography`]: process tomography by linear inversion and the
//!   gate-folding fidelity slope.
//! - [`experiments`]: configurable batch runners and CSV/JSON emission.
//!
//! Conventions: sites `1..=L` map to qubit indices `0..L`; bitstring
//! character `k` is qubit `k`; `|0>` has `Z = +1`. Rotations are
//! `R_P(θ) = exp(-iθP/2)` and `S = diag(1, i)`.
//!
//! Runnable walkthroughs of each capability live in this crate's `examples/`
//! directory, e.g. `cargo run --release --example trotter_scar_dynamics`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod fit;
pub mod mitigation;
pub mod model;
pub mod noise;
pub mod observables;
pub mod qsim;
pub mod seed;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64;
