//! Staggered magnetization and Loschmidt echo.

use crate::qsim::state::parse_bitstring;
use crate::qsim::{Counts, Statevector};
use crate::{Error, Result};

/// `(−1)^i` for 1-based site `i = qubit + 1`.
pub fn staggered_sign(qubit: usize) -> f64 {
    if qubit.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

/// `Σ_i (−1)^i ⟨Z_i⟩` from per-site magnetizations.
pub fn staggered_from_sites(z: &[f64]) -> f64 {
    z.iter()
        .enumerate()
        .map(|(q, v)| staggered_sign(q) * v)
        .sum()
}

pub fn staggered_magnetization_state(state: &Statevector) -> f64 {
    staggered_from_sites(&state.z_expectations())
}

/// Shot-weighted `Σ_i (−1)^i (1 − 2 b_i)`; quasi-counts are used as given.
pub fn staggered_magnetization(counts: &Counts) -> Result<f64> {
    staggered_magnetization_sites(counts).map(|z| staggered_from_sites(&z))
}

/// Per-site `⟨Z_i⟩`.
pub fn staggered_magnetization_sites(counts: &Counts) -> Result<Vec<f64>> {
    counts.z_expectations()
}

/// Fraction of shots within Hamming distance `flips_allowed` of `reference`.
pub fn loschmidt_echo(counts: &Counts, reference: &str, flips_allowed: u32) -> Result<f64> {
    if reference.len() != counts.width() {
        return Err(Error::WidthMismatch {
            expected: counts.width(),
            found: reference.len(),
        });
    }
    let target = parse_bitstring(reference)?;
    counts.mean_of(|i| f64::from(u8::from((i ^ target).count_ones() <= flips_allowed)))
}

/// Exact return probability, optionally summed over single flips.
pub fn loschmidt_echo_state(
    state: &Statevector,
    reference: &str,
    flips_allowed: u32,
) -> Result<f64> {
    if reference.len() != state.width() {
        return Err(Error::WidthMismatch {
            expected: state.width(),
            found: reference.len(),
        });
    }
    let target = parse_bitstring(reference)?;
    Ok(state
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(i, _)| (i ^ target).count_ones() <= flips_allowed)
        .map(|(_, p)| p)
        .sum())
}
