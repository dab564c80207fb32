//! Readout confusion. Entry `M[measured][prepared]`; columns sum to one.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::spec::NoiseSpec;
use crate::qsim::counts::sample_probabilities;
use crate::qsim::{bit_mask, Counts, Shots};
use crate::{seed, Error, Result};

/// Largest register for a dense `2^L × 2^L` confusion matrix.
pub const MAX_FULL_WIDTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfusionMethod {
    Full,
    Tensor,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfusionMatrix {
    /// Dense row-major `2^L × 2^L`.
    Full { width: usize, matrix: Vec<f64> },
    /// One 2×2 factor per qubit.
    Tensor { factors: Vec<[[f64; 2]; 2]> },
}

/// Single-qubit factor `[[1−ε, η], [ε, 1−η]]`.
pub fn qubit_factor(epsilon: f64, eta: f64) -> [[f64; 2]; 2] {
    [[1.0 - epsilon, eta], [epsilon, 1.0 - eta]]
}

impl ConfusionMatrix {
    pub fn tensor(factors: Vec<[[f64; 2]; 2]>) -> Result<Self> {
        for f in &factors {
            for col in 0..2 {
                check_column(&[f[0][col], f[1][col]])?;
            }
        }
        Ok(Self::Tensor { factors })
    }

    pub fn full(width: usize, matrix: Vec<f64>) -> Result<Self> {
        if width > MAX_FULL_WIDTH {
            return Err(Error::TooLarge {
                what: "full confusion matrix width",
                size: width,
                max: MAX_FULL_WIDTH,
            });
        }
        let dim = 1usize << width;
        if matrix.len() != dim * dim {
            return Err(Error::InvalidParameter("confusion matrix shape".into()));
        }
        for col in 0..dim {
            let column: Vec<f64> = (0..dim).map(|r| matrix[r * dim + col]).collect();
            check_column(&column)?;
        }
        Ok(Self::Full { width, matrix })
    }

    pub fn identity(width: usize) -> Self {
        Self::Tensor {
            factors: vec![qubit_factor(0.0, 0.0); width],
        }
    }

    /// The exact confusion model implied by a noise spec.
    pub fn from_spec(spec: &NoiseSpec, width: usize, method: ConfusionMethod) -> Result<Self> {
        let factors: Vec<_> = (0..width)
            .map(|q| {
                let r = spec.readout_for(q);
                qubit_factor(r.epsilon, r.eta)
            })
            .collect();
        let t = Self::tensor(factors)?;
        match method {
            ConfusionMethod::Tensor => Ok(t),
            ConfusionMethod::Full => t.to_full(),
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Self::Full { width, .. } => *width,
            Self::Tensor { factors } => factors.len(),
        }
    }

    pub fn method(&self) -> ConfusionMethod {
        match self {
            Self::Full { .. } => ConfusionMethod::Full,
            Self::Tensor { .. } => ConfusionMethod::Tensor,
        }
    }

    pub fn to_full(&self) -> Result<Self> {
        match self {
            Self::Full { .. } => Ok(self.clone()),
            Self::Tensor { factors } => {
                let width = factors.len();
                if width > MAX_FULL_WIDTH {
                    return Err(Error::TooLarge {
                        what: "full confusion matrix width",
                        size: width,
                        max: MAX_FULL_WIDTH,
                    });
                }
                let dim = 1usize << width;
                let mut matrix = vec![0.0; dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        matrix[r * dim + c] = (0..width)
                            .map(|q| {
                                let m = bit_mask(width, q);
                                factors[q][usize::from(r & m != 0)][usize::from(c & m != 0)]
                            })
                            .product();
                    }
                }
                Ok(Self::Full { width, matrix })
            }
        }
    }

    /// Entry `M[measured][prepared]`.
    pub fn entry(&self, measured: usize, prepared: usize) -> f64 {
        match self {
            Self::Full { width, matrix } => matrix[measured * (1usize << width) + prepared],
            Self::Tensor { factors } => {
                let w = factors.len();
                (0..w)
                    .map(|q| {
                        let m = bit_mask(w, q);
                        factors[q][usize::from(measured & m != 0)][usize::from(prepared & m != 0)]
                    })
                    .product()
            }
        }
    }

    /// `M v` for a dense vector over all outcomes.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        match self {
            Self::Full { width, matrix } => {
                let dim = 1usize << width;
                (0..dim)
                    .map(|r| {
                        matrix[r * dim..(r + 1) * dim]
                            .iter()
                            .zip(v)
                            .map(|(a, b)| a * b)
                            .sum()
                    })
                    .collect()
            }
            Self::Tensor { factors } => apply_factors(factors, v),
        }
    }
}

/// Applies one 2×2 matrix per qubit to a dense vector.
pub(crate) fn apply_factors(factors: &[[[f64; 2]; 2]], v: &[f64]) -> Vec<f64> {
    let width = factors.len();
    let mut out = v.to_vec();
    for (q, f) in factors.iter().enumerate() {
        let m = bit_mask(width, q);
        for i in 0..out.len() {
            if i & m == 0 {
                let (a0, a1) = (out[i], out[i | m]);
                out[i] = f[0][0] * a0 + f[0][1] * a1;
                out[i | m] = f[1][0] * a0 + f[1][1] * a1;
            }
        }
    }
    out
}

fn check_column(col: &[f64]) -> Result<()> {
    if col.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidProbability(
            "confusion entry outside [0, 1]".into(),
        ));
    }
    let s: f64 = col.iter().sum();
    if (s - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbability(format!(
            "confusion column sums to {s}"
        )));
    }
    Ok(())
}

/// Forward readout noise in the exact (infinite-shot) sense: `C → M C`.
pub fn apply_readout_exact(counts: &Counts, m: &ConfusionMatrix) -> Result<Counts> {
    check_width(counts, m)?;
    let noisy = m.apply(&counts.to_dense());
    let mut out = Counts::new(counts.width(), counts.total_shots());
    for (i, w) in noisy.into_iter().enumerate() {
        if w != 0.0 {
            out.add(i, w);
        }
    }
    Ok(out)
}

/// Forward readout noise shot by shot.
pub fn apply_readout_sampled<R: Rng>(
    counts: &Counts,
    m: &ConfusionMatrix,
    rng: &mut R,
) -> Result<Counts> {
    check_width(counts, m)?;
    let width = counts.width();
    let mut out = Counts::new(width, counts.total_shots());
    for (prepared, w) in counts.iter() {
        if w < 0.0 || w.fract() != 0.0 {
            return Err(Error::InvalidParameter(
                "sampled readout needs integer shot counts".into(),
            ));
        }
        let shots = w as u64;
        if shots == 0 {
            continue;
        }
        match m {
            ConfusionMatrix::Tensor { factors } => {
                for _ in 0..shots {
                    let mut measured = prepared;
                    for (q, f) in factors.iter().enumerate() {
                        let mask = bit_mask(width, q);
                        let bit = usize::from(prepared & mask != 0);
                        if rng.random::<f64>() < f[1 - bit][bit] {
                            measured ^= mask;
                        }
                    }
                    out.add(measured, 1.0);
                }
            }
            ConfusionMatrix::Full { .. } => {
                let column: Vec<f64> = (0..1usize << width).map(|r| m.entry(r, prepared)).collect();
                for (i, k) in
                    sample_probabilities(width, &column, Shots::Finite(shots), rng)?.iter()
                {
                    out.add(i, k);
                }
            }
        }
    }
    Ok(out)
}

/// Forward readout noise: exact when `seed` is `None`, sampled otherwise.
pub fn apply_readout_error(
    counts: &Counts,
    m: &ConfusionMatrix,
    seed_value: Option<u64>,
) -> Result<Counts> {
    match seed_value {
        None => apply_readout_exact(counts, m),
        Some(s) => apply_readout_sampled(counts, m, &mut seed::rng(s, &[])),
    }
}

fn check_width(counts: &Counts, m: &ConfusionMatrix) -> Result<()> {
    if counts.width() != m.width() {
        return Err(Error::WidthMismatch {
            expected: m.width(),
            found: counts.width(),
        });
    }
    Ok(())
}
