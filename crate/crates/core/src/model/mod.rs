//! Mixed-field Ising chain: parameters, Hamiltonian, Trotter circuits,
//! Néel states, the Fibonacci subspace and exact evolution.

pub mod exact;
pub mod fibonacci;
pub mod hamiltonian;
pub mod params;
pub mod trotter;

pub use exact::{exact_evolve, ExactPropagator};
pub use fibonacci::{fibonacci_projector, project, FibonacciMask, Projection};
pub use hamiltonian::{build_hamiltonian, HamiltonianForm};
pub use params::{BondSchedule, ModelParams, RzzImpl, TrotterAngles, TrotterOptions};
pub use trotter::{
    build_trotter_step, neel_prep, neel_state, rzz_gates, trotter_circuit, NeelVariant,
};
