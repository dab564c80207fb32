//! SPAM-free gate error from fidelities of `G`, `G G† G`, `G G† G G† G`, …

use serde::{Deserialize, Serialize};

use super::qpt::qpt_reconstruct;
use crate::fit::linear_fit;
use crate::noise::NoiseModel;
use crate::qsim::{Circuit, Shots};
use crate::{seed, Error, Result};

/// `G (G† G)^{(λ−1)/2}` for odd integer `λ`.
pub fn fold_sequence(gate: &Circuit, lambda: u32) -> Result<Circuit> {
    if lambda.is_multiple_of(2) {
        return Err(Error::InvalidScaleFactor(f64::from(lambda)));
    }
    let mut c = gate.clone();
    let inverse = gate.inverse();
    for _ in 0..(lambda - 1) / 2 {
        c.append(&inverse)?;
        c.append(gate)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub lambda: u32,
    pub repeat: usize,
    pub fidelity: f64,
}

/// Fit `F(λ) = F0 − ε λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySlope {
    pub f0: f64,
    pub epsilon: f64,
    pub epsilon_std: f64,
    pub f0_std: f64,
    pub covariance: [[f64; 2]; 2],
    pub points: Vec<FidelityPoint>,
}

/// Structured report with the fidelity definition in its header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub fidelity_definition: String,
    pub shots_per_setting: u64,
    pub infinite_shots: bool,
    pub result: FidelitySlope,
}

impl SlopeReport {
    pub fn new(result: FidelitySlope, shots: Shots) -> Self {
        Self {
            fidelity_definition:
                "average gate fidelity (4 F_pro + 1) / 5 from linear-inversion PTM".into(),
            shots_per_setting: shots.count(),
            infinite_shots: shots.is_infinite(),
            result,
        }
    }
}

/// Tomography of each folded sequence, `repeats` times per scale factor, and
/// an unweighted linear fit over all points.
pub fn spam_free_error(
    gate: &Circuit,
    model: &NoiseModel,
    scale_factors: &[u32],
    repeats: usize,
    shots: Shots,
    seed_value: u64,
) -> Result<FidelitySlope> {
    let mut distinct = scale_factors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::DegenerateFit(
            "need at least two scale factors".into(),
        ));
    }
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let mut points = Vec::new();
    for &lambda in scale_factors {
        let circuit = fold_sequence(gate, lambda)?;
        for repeat in 0..repeats {
            let s = seed::derive(seed_value, &[u64::from(lambda), repeat as u64]);
            let r = qpt_reconstruct(&circuit, model, shots, s)?;
            points.push(FidelityPoint {
                lambda,
                repeat,
                fidelity: r.average_fidelity,
            });
        }
    }
    let x: Vec<f64> = points.iter().map(|p| f64::from(p.lambda)).collect();
    let y: Vec<f64> = points.iter().map(|p| p.fidelity).collect();
    let fit = linear_fit(&x, &y, None)?;
    Ok(FidelitySlope {
        f0: fit.intercept,
        epsilon: -fit.slope,
        epsilon_std: fit.slope_std(),
        f0_std: fit.intercept_std(),
        covariance: fit.covariance,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{NoiseSpec, ReadoutNoise};
    use crate::qsim::Gate;

    fn cnot() -> Circuit {
        Circuit::from_gates(
            2,
            [Gate::Cnot {
                control: 0,
                target: 1,
            }],
        )
        .unwrap()
    }

    #[test]
    fn folding_keeps_unitary() {
        let g = Circuit::from_gates(
            2,
            [Gate::Rzz {
                a: 0,
                b: 1,
                theta: 0.8,
            }],
        )
        .unwrap();
        let f = fold_sequence(&g, 5).unwrap();
        assert_eq!(f.two_qubit_count(), 5);
        let d = crate::qsim::dense::phase_insensitive_diff(
            &f.unitary().unwrap(),
            &g.unitary().unwrap(),
        );
        assert!(d < 1e-12);
        assert!(fold_sequence(&g, 2).is_err());
    }

    #[test]
    fn known_infidelity_is_recovered() {
        let iota = 0.01;
        let spec = NoiseSpec {
            readout: ReadoutNoise {
                epsilon: 0.02,
                eta: 0.04,
            },
            ..NoiseSpec::depolarizing(4.0 * iota / 3.0)
        };
        let r = spam_free_error(
            &cnot(),
            &spec.compile().unwrap(),
            &[1, 3, 5],
            1,
            Shots::Infinite(1),
            0,
        )
        .unwrap();
        assert!((r.epsilon - iota).abs() < 0.2 * iota, "{r:?}");
        let clean = spam_free_error(
            &cnot(),
            &NoiseSpec::depolarizing(4.0 * iota / 3.0).compile().unwrap(),
            &[1, 3, 5],
            1,
            Shots::Infinite(1),
            0,
        )
        .unwrap();
        assert!(r.f0 < clean.f0);
        assert!((clean.epsilon - iota).abs() < 0.05 * iota);
    }

    #[test]
    fn noiseless_slope_is_zero_within_noise() {
        let model = NoiseSpec::noiseless().compile().unwrap();
        let r = spam_free_error(&cnot(), &model, &[1, 3, 5], 4, Shots::Finite(1024), 11).unwrap();
        assert!(r.epsilon.abs() <= 3.0 * r.epsilon_std.max(1e-12), "{r:?}");
    }

    #[test]
    fn too_few_scale_factors() {
        let model = NoiseSpec::noiseless().compile().unwrap();
        assert!(spam_free_error(&cnot(), &model, &[1, 1], 2, Shots::Infinite(1), 0).is_err());
    }
}
