use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::bit_mask;
use super::state::{format_bitstring, parse_bitstring, Statevector};
use crate::{seed, Error, Result};

/// Shot budget. `Infinite(n)` yields exact probabilities scaled to `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shots {
    Finite(u64),
    Infinite(u64),
}

impl Shots {
    pub fn count(self) -> u64 {
        match self {
            Shots::Finite(n) | Shots::Infinite(n) => n,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Shots::Infinite(_))
    }
}

/// Outcome histogram keyed by basis index. Weights are `f64` so that exact
/// (infinite-shot) distributions and signed quasi-counts from readout
/// inversion share the type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    width: usize,
    entries: BTreeMap<usize, f64>,
    total_shots: u64,
}

impl Counts {
    pub fn new(width: usize, total_shots: u64) -> Self {
        Self {
            width,
            entries: BTreeMap::new(),
            total_shots,
        }
    }

    /// Histogram from `(bitstring, count)` pairs; `total_shots` is their sum.
    pub fn from_bitstrings<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        let mut width = None;
        let mut out = Counts::new(0, 0);
        for (bits, n) in pairs {
            match width {
                None => {
                    width = Some(bits.len());
                    out.width = bits.len();
                }
                Some(w) if w != bits.len() => {
                    return Err(Error::WidthMismatch {
                        expected: w,
                        found: bits.len(),
                    })
                }
                _ => {}
            }
            out.add(parse_bitstring(bits)?, n as f64);
            out.total_shots += n;
        }
        Ok(out)
    }

    /// Exact distribution scaled to `shots`, dropping zero entries.
    pub fn from_probabilities(width: usize, probs: &[f64], shots: u64) -> Self {
        let mut out = Counts::new(width, shots);
        for (i, &p) in probs.iter().enumerate() {
            if p != 0.0 {
                out.entries.insert(i, p * shots as f64);
            }
        }
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Nominal shot budget the histogram was drawn with.
    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn set_total_shots(&mut self, n: u64) {
        self.total_shots = n;
    }

    /// Sum of stored weights.
    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() || self.total() == 0.0
    }

    pub fn add(&mut self, index: usize, weight: f64) {
        *self.entries.entry(index).or_insert(0.0) += weight;
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    pub fn get_bitstring(&self, bits: &str) -> f64 {
        parse_bitstring(bits).map(|i| self.get(i)).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn bitstring(&self, index: usize) -> String {
        format_bitstring(index, self.width)
    }

    /// True if readout inversion left any negative weight.
    pub fn is_quasi(&self) -> bool {
        self.entries.values().any(|&v| v < 0.0)
    }

    /// Dense vector of weights over all `2^width` outcomes.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1 << self.width];
        for (i, w) in self.iter() {
            v[i] = w;
        }
        v
    }

    /// Keeps only outcomes for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> Counts {
        Counts {
            width: self.width,
            entries: self
                .entries
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, &v)| (k, v))
                .collect(),
            total_shots: self.total_shots,
        }
    }

    /// Normalizes weights to sum to one. Errors on an empty or zero-sum
    /// histogram.
    pub fn normalized(&self) -> Result<Vec<(usize, f64)>> {
        let total = self.total();
        if self.entries.is_empty() || total == 0.0 {
            return Err(Error::EmptyCounts);
        }
        Ok(self.iter().map(|(k, v)| (k, v / total)).collect())
    }

    /// Weighted mean of `f(index)` under the normalized histogram.
    pub fn mean_of(&self, mut f: impl FnMut(usize) -> f64) -> Result<f64> {
        Ok(self.normalized()?.into_iter().map(|(k, p)| p * f(k)).sum())
    }

    /// `⟨Z_q⟩` for every qubit.
    pub fn z_expectations(&self) -> Result<Vec<f64>> {
        let probs = self.normalized()?;
        Ok((0..self.width)
            .map(|q| {
                let m = bit_mask(self.width, q);
                probs
                    .iter()
                    .map(|&(k, p)| if k & m == 0 { p } else { -p })
                    .sum()
            })
            .collect())
    }

    /// Weights keyed by bitstring.
    pub fn to_bitstring_map(&self) -> BTreeMap<String, f64> {
        self.iter().map(|(k, v)| (self.bitstring(k), v)).collect()
    }
}

/// Multinomial sample of `shots` outcomes from `probs`.
pub fn sample_probabilities<R: Rng>(
    width: usize,
    probs: &[f64],
    shots: Shots,
    rng: &mut R,
) -> Result<Counts> {
    let n = shots.count();
    if n == 0 {
        return Err(Error::ZeroShots);
    }
    if shots.is_infinite() {
        return Ok(Counts::from_probabilities(width, probs, n));
    }
    let mut out = Counts::new(width, n);
    if (n as usize).saturating_mul(4) < probs.len() {
        // Few shots over many outcomes: sorted uniforms against the CDF.
        let total: f64 = probs.iter().filter(|p| **p > 0.0).sum();
        let mut u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * total).collect();
        u.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mut acc = 0.0;
        let mut k = 0;
        let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        for (i, &p) in probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            let start = k;
            while k < u.len() && (u[k] < acc || i == last) {
                k += 1;
            }
            if k > start {
                out.add(i, (k - start) as f64);
            }
            if k == u.len() {
                break;
            }
        }
        return Ok(out);
    }
    let mut remaining = n;
    let mut mass = 1.0f64;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = if q >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, q)
                .expect("probability in [0, 1]")
                .sample(rng)
        };
        if k > 0 {
            out.add(i, k as f64);
        }
        remaining -= k;
        mass -= p;
    }
    if remaining > 0 {
        // Rounding left mass on the tail; assign to the last populated outcome.
        let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        out.add(last, remaining as f64);
    }
    Ok(out)
}

pub fn sample_counts(state: &Statevector, shots: u64, seed_value: u64) -> Result<Counts> {
    let mut rng = seed::rng(seed_value, &[]);
    sample_probabilities(
        state.width(),
        &state.probabilities(),
        Shots::Finite(shots),
        &mut rng,
    )
}

pub fn exact_counts(state: &Statevector, shots: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    Ok(Counts::from_probabilities(
        state.width(),
        &state.probabilities(),
        shots,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{run_circuit, Circuit, Gate};

    fn bell() -> Statevector {
        let c = Circuit::from_gates(
            2,
            [
                Gate::H(0),
                Gate::Cnot {
                    control: 0,
                    target: 1,
                },
            ],
        )
        .unwrap();
        run_circuit(&Statevector::zero(2), &c).unwrap()
    }

    #[test]
    fn basis_state_samples_single_outcome() {
        let s = Statevector::from_bitstring("0101").unwrap();
        let c = sample_counts(&s, 1000, 3).unwrap();
        assert_eq!(c.get_bitstring("0101"), 1000.0);
        assert_eq!(c.iter().count(), 1);
    }

    #[test]
    fn infinite_shots_are_exact() {
        let c = exact_counts(&bell(), 8192).unwrap();
        let m = c.to_bitstring_map();
        assert!((m["00"] - 4096.0).abs() < 1e-9);
        assert!((m["11"] - 4096.0).abs() < 1e-9);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        assert_eq!(
            sample_counts(&bell(), 500, 9).unwrap(),
            sample_counts(&bell(), 500, 9).unwrap()
        );
        assert!(matches!(
            sample_counts(&bell(), 0, 9),
            Err(Error::ZeroShots)
        ));
    }

    #[test]
    fn finite_frequencies_within_binomial_bounds() {
        let n = 20_000u64;
        let c = sample_counts(&bell(), n, 11).unwrap();
        assert_eq!(c.total(), n as f64);
        let f = c.get_bitstring("00") / n as f64;
        let sigma = (0.25f64 / n as f64).sqrt();
        assert!((f - 0.5).abs() < 5.0 * sigma);
    }

    #[test]
    fn z_expectations_from_counts() {
        let c = Counts::from_bitstrings([("01", 3), ("11", 1)]).unwrap();
        let z = c.z_expectations().unwrap();
        assert!((z[0] - 0.5).abs() < 1e-12);
        assert!((z[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sparse_shot_path_matches_distribution() {
        // 64 outcomes, 8 shots per draw: the sorted-uniform path.
        let probs: Vec<f64> = (0..64)
            .map(|i| if i % 3 == 0 { 2.0 } else { 1.0 })
            .collect();
        let norm: f64 = probs.iter().sum();
        let probs: Vec<f64> = probs.iter().map(|p| p / norm).collect();
        let mut rng = seed::rng(5, &[]);
        let mut freq = vec![0.0; 64];
        let draws = 20_000;
        for _ in 0..draws {
            let c = sample_probabilities(6, &probs, Shots::Finite(8), &mut rng).unwrap();
            assert_eq!(c.total(), 8.0);
            for (i, w) in c.iter() {
                freq[i] += w;
            }
        }
        let n = 8.0 * draws as f64;
        for (f, p) in freq.iter().zip(&probs) {
            let sd = (n * p * (1.0 - p)).sqrt();
            assert!((f - n * p).abs() < 5.0 * sd);
        }
    }
}
