//! Physics observables: staggered magnetization, Loschmidt echo,
//! accumulated error and the unequal-time correlator `C_Y(t)`.

pub mod accumulated;
pub mod correlator;
pub mod magnetization;
pub mod series;
pub mod spectrum;

pub use accumulated::{accumulated_error, SiteSeries};
pub use correlator::{
    apply_pyp, apply_y_pi, assemble_cy, build_cy_circuits, cy_oracle, cy_prep,
    cy_protocol_noiseless, local_correlator, measurement_basis, pyp_expectation,
    pyp_expectation_state, pyp_operator, BranchValues, CyBranch, CyPlan, CySetting, Parity,
};
pub use magnetization::{
    loschmidt_echo, loschmidt_echo_state, staggered_from_sites, staggered_magnetization,
    staggered_magnetization_sites, staggered_magnetization_state, staggered_sign,
};
pub use series::{SeriesPoint, TimeSeries};
pub use spectrum::{dominant_frequency, first_revival, period};
