//! Readout-error mitigation by confusion-matrix inversion.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::noise::{apply_readout_error, ConfusionMatrix, ConfusionMethod, NoiseSpec};
use crate::qsim::counts::sample_probabilities;
use crate::qsim::{bit_mask, Counts, Shots};
use crate::{seed, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadoutMode {
    Off,
    #[default]
    Tensor,
    Full,
}

impl ReadoutMode {
    pub fn method(self) -> Option<ConfusionMethod> {
        match self {
            Self::Off => None,
            Self::Tensor => Some(ConfusionMethod::Tensor),
            Self::Full => Some(ConfusionMethod::Full),
        }
    }
}

impl std::str::FromStr for ReadoutMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(Self::Off),
            "tensor" => Ok(Self::Tensor),
            "full" => Ok(Self::Full),
            other => Err(Error::Config(format!("unknown readout mode `{other}`"))),
        }
    }
}

const PIVOT_TOL: f64 = 1e-12;

/// Precomputed inverse of a confusion matrix, reusable across many count sets.
pub enum ReadoutMitigator {
    Tensor(Vec<[[f64; 2]; 2]>),
    Full { width: usize, lu: PartialPivLu<f64> },
}

impl std::fmt::Debug for ReadoutMitigator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Tensor(inv) => f.debug_tuple("Tensor").field(inv).finish(),
            Self::Full { width, .. } => f
                .debug_struct("Full")
                .field("width", width)
                .finish_non_exhaustive(),
        }
    }
}

fn invert_2x2(m: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < PIVOT_TOL {
        return Err(Error::SingularMatrix(format!(
            "readout factor determinant {det:.3e}"
        )));
    }
    Ok([
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ])
}

impl ReadoutMitigator {
    pub fn new(m: &ConfusionMatrix) -> Result<Self> {
        match m {
            ConfusionMatrix::Tensor { factors } => Ok(Self::Tensor(
                factors.iter().map(invert_2x2).collect::<Result<_>>()?,
            )),
            ConfusionMatrix::Full { width, matrix } => {
                let dim = 1usize << width;
                let a = Mat::from_fn(dim, dim, |r, c| matrix[r * dim + c]);
                let lu = a.partial_piv_lu();
                let u = lu.U();
                let scale = (0..dim).map(|k| u[(k, k)].abs()).fold(0.0, f64::max);
                let smallest = (0..dim)
                    .map(|k| u[(k, k)].abs())
                    .fold(f64::INFINITY, f64::min);
                if !(smallest > PIVOT_TOL * scale) {
                    return Err(Error::SingularMatrix(format!(
                        "confusion pivot {smallest:.3e}"
                    )));
                }
                Ok(Self::Full { width: *width, lu })
            }
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Self::Tensor(f) => f.len(),
            Self::Full { width, .. } => *width,
        }
    }

    /// `M⁻¹ C`; the output may hold negative quasi-counts.
    pub fn apply(&self, counts: &Counts) -> Result<Counts> {
        if counts.width() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                found: counts.width(),
            });
        }
        let dense = counts.to_dense();
        let ideal = match self {
            Self::Tensor(inv) => crate::noise::readout::apply_factors(inv, &dense),
            Self::Full { lu, .. } => {
                let mut rhs = Mat::from_fn(dense.len(), 1, |r, _| dense[r]);
                lu.solve_in_place(rhs.as_mut());
                (0..dense.len()).map(|r| rhs[(r, 0)]).collect()
            }
        };
        let mut out = Counts::new(counts.width(), counts.total_shots());
        for (i, w) in ideal.into_iter().enumerate() {
            if w != 0.0 {
                out.add(i, w);
            }
        }
        Ok(out)
    }
}

/// `C_ideal = M⁻¹ C_noisy`.
pub fn mitigate_readout(counts: &Counts, m: &ConfusionMatrix) -> Result<Counts> {
    ReadoutMitigator::new(m)?.apply(counts)
}

/// Clips negative quasi-counts and renormalizes to the original total.
pub fn clip_quasi(counts: &Counts) -> Result<Counts> {
    let total = counts.total();
    let kept = counts;
    let positive: f64 = kept.iter().map(|(_, w)| w.max(0.0)).sum();
    if positive <= 0.0 {
        return Err(Error::EmptyCounts);
    }
    let mut out = Counts::new(counts.width(), counts.total_shots());
    for (i, w) in kept.iter() {
        if w > 0.0 {
            out.add(i, w * total / positive);
        }
    }
    Ok(out)
}

/// Estimates the confusion matrix from simulated calibration circuits.
///
/// `Full` prepares every basis state; `Tensor` prepares `|0…0⟩` and `|1…1⟩`
/// and reads per-qubit flip rates off the marginals.
pub fn calibrate_confusion(
    spec: &NoiseSpec,
    width: usize,
    shots: Shots,
    method: ConfusionMethod,
    seed_value: u64,
) -> Result<ConfusionMatrix> {
    if shots.count() == 0 {
        return Err(Error::ZeroShots);
    }
    let truth = ConfusionMatrix::from_spec(spec, width, ConfusionMethod::Tensor)?;
    match method {
        ConfusionMethod::Tensor => {
            let all_ones = (1usize << width) - 1;
            let mut measured = Vec::with_capacity(2);
            for (k, prepared) in [0usize, all_ones].into_iter().enumerate() {
                let mut c = Counts::new(width, shots.count());
                c.add(prepared, shots.count() as f64);
                let s = (!shots.is_infinite()).then(|| seed::derive(seed_value, &[k as u64]));
                measured.push(apply_readout_error(&c, &truth, s)?);
            }
            let factors = (0..width)
                .map(|q| {
                    let mask = bit_mask(width, q);
                    let ones = |c: &Counts| {
                        c.iter()
                            .filter(|(i, _)| i & mask != 0)
                            .map(|(_, w)| w)
                            .sum::<f64>()
                            / c.total()
                    };
                    let eps = ones(&measured[0]);
                    let eta = 1.0 - ones(&measured[1]);
                    crate::noise::readout::qubit_factor(eps, eta)
                })
                .collect();
            ConfusionMatrix::tensor(factors)
        }
        ConfusionMethod::Full => {
            let exact = truth.to_full()?;
            if shots.is_infinite() {
                return Ok(exact);
            }
            let dim = 1usize << width;
            let mut matrix = vec![0.0; dim * dim];
            for prepared in 0..dim {
                let column: Vec<f64> = (0..dim).map(|r| exact.entry(r, prepared)).collect();
                let mut rng = seed::rng(seed_value, &[prepared as u64]);
                let c = sample_probabilities(width, &column, shots, &mut rng)?;
                for (r, w) in c.iter() {
                    matrix[r * dim + prepared] = w / shots.count() as f64;
                }
            }
            ConfusionMatrix::full(width, matrix)
        }
    }
}
