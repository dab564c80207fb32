//! Unitary folding for zero-noise extrapolation.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::qsim::Circuit;
use crate::{seed, Error, Result};

/// Scale factors, fold seed and twirl count for one ZNE batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ZneConfig {
    pub scale_factors: Vec<f64>,
    pub folds_seed: u64,
    pub twirl_instances: usize,
    /// Weighted least squares using per-λ sample standard deviations.
    pub weighted: bool,
}

impl Default for ZneConfig {
    fn default() -> Self {
        Self {
            scale_factors: vec![1.0, 1.5, 2.0],
            folds_seed: 0,
            twirl_instances: 10,
            weighted: true,
        }
    }
}

impl ZneConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scale_factors.first() != Some(&1.0) {
            return Err(Error::InvalidScaleFactor(
                self.scale_factors.first().copied().unwrap_or(f64::NAN),
            ));
        }
        for w in self.scale_factors.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidScaleFactor(w[1]));
            }
        }
        if self.twirl_instances == 0 {
            return Err(Error::InvalidParameter(
                "twirl_instances must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Number of two-qubit gates to fold, rounding half up.
pub fn fold_count(two_qubit_gates: usize, lambda: f64) -> Result<usize> {
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::InvalidScaleFactor(lambda));
    }
    let k = ((lambda - 1.0) / 2.0 * two_qubit_gates as f64 + 0.5).floor() as usize;
    Ok(k.min(two_qubit_gates))
}

/// Replaces `k` uniformly chosen two-qubit gates `G` with `G G† G`.
pub fn fold_gates_random(circuit: &Circuit, lambda: f64, seed_value: u64) -> Result<Circuit> {
    let k = fold_count(circuit.two_qubit_count(), lambda)?;
    fold_gates_count(circuit, k, seed_value)
}

/// Folds exactly `k` two-qubit gates chosen uniformly without replacement.
pub fn fold_gates_count(circuit: &Circuit, k: usize, seed_value: u64) -> Result<Circuit> {
    let positions: Vec<usize> = circuit
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.is_two_qubit())
        .map(|(i, _)| i)
        .collect();
    if k > positions.len() {
        return Err(Error::InvalidParameter(format!(
            "cannot fold {k} of {} gates",
            positions.len()
        )));
    }
    if k == 0 {
        return Ok(circuit.clone());
    }
    let mut rng = seed::rng(seed_value, &[]);
    let mut chosen = vec![false; circuit.len()];
    for i in sample(&mut rng, positions.len(), k) {
        chosen[positions[i]] = true;
    }
    let mut out = Circuit::new(circuit.width());
    for (i, g) in circuit.gates().iter().enumerate() {
        out.push(g.clone())?;
        if chosen[i] {
            out.push(g.inverse())?;
            out.push(g.clone())?;
        }
    }
    Ok(out)
}

/// Per-block fold counts such that every prefix of blocks carries exactly
/// `fold_count(prefix two-qubit gates, λ)` folds.
pub fn prefix_fold_counts(two_qubit_per_block: &[usize], lambda: f64) -> Result<Vec<usize>> {
    let mut total = 0;
    let mut folded = 0;
    two_qubit_per_block
        .iter()
        .map(|&n| {
            total += n;
            let k = fold_count(total, lambda)?;
            let here = k - folded;
            folded = k;
            Ok(here)
        })
        .collect()
}

/// Effective scale factor of a folded circuit relative to the original.
pub fn effective_scale(original: &Circuit, folded: &Circuit) -> f64 {
    folded.two_qubit_count() as f64 / original.two_qubit_count().max(1) as f64
}
