use nalgebra::DMatrix;

use super::params::ModelParams;
use crate::qsim::bit_mask;
use crate::{Error, Result};

/// Largest chain for dense Hamiltonian construction.
pub const MAX_DENSE_SITES: usize = 14;

/// The two equivalent ways of writing the chain Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianForm {
    /// `4V Σ n_i n_{i+1} + Ω Σ X_i` with `n = (1 − Z)/2`.
    Occupation,
    /// `V Σ Z_i Z_{i+1} − 2V Σ_bulk Z_i − V (Z_1 + Z_L) + Ω Σ X_i`.
    Spin,
}

/// Diagonal (computational-basis) part of the Hamiltonian.
pub fn diagonal(p: &ModelParams, form: HamiltonianForm) -> Vec<f64> {
    let l = p.sites;
    let z = |idx: usize, q: usize| if idx & bit_mask(l, q) == 0 { 1.0 } else { -1.0 };
    (0..1usize << l)
        .map(|idx| match form {
            HamiltonianForm::Occupation => {
                let pairs = (0..l - 1)
                    .filter(|&q| idx & bit_mask(l, q) != 0 && idx & bit_mask(l, q + 1) != 0)
                    .count();
                4.0 * p.v * pairs as f64
            }
            HamiltonianForm::Spin => {
                let zz: f64 = (0..l - 1).map(|q| z(idx, q) * z(idx, q + 1)).sum();
                let field: f64 = (0..l)
                    .map(|q| if q == 0 || q == l - 1 { -p.v } else { -2.0 * p.v } * z(idx, q))
                    .sum();
                p.v * zz + field
            }
        })
        .collect()
}

/// Dense `2^L × 2^L` Hamiltonian (real symmetric).
pub fn build_hamiltonian(p: &ModelParams, form: HamiltonianForm) -> Result<DMatrix<f64>> {
    p.validate()?;
    if p.sites > MAX_DENSE_SITES {
        return Err(Error::TooLarge {
            what: "dense Hamiltonian sites",
            size: p.sites,
            max: MAX_DENSE_SITES,
        });
    }
    let dim = 1usize << p.sites;
    let diag = diagonal(p, form);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (idx, d) in diag.into_iter().enumerate() {
        h[(idx, idx)] = d;
        for q in 0..p.sites {
            h[(idx ^ bit_mask(p.sites, q), idx)] += p.omega;
        }
    }
    Ok(h)
}
