//! Noise configuration and its compiled per-gate form.
//!
//! A [`NoiseSpec`] is plain data, loadable from TOML:
//!
//! ```toml
//! name = "custom"
//! single_qubit_depolarizing = 0.0
//! coherent_overrotation = 0.0
//!
//! [two_qubit]
//! model = "duration-law"     # "none" | "depolarizing" | "pauli" | "duration-law"
//! target_p = 0.016           # duration-law: p of a two-CNOT R_ZZ(2.0)
//!
//! [pulse]
//! amp_ref = 0.25
//! width_ref = 560.0
//! sigma = 64.0
//! n_sigma = 2.0
//! sample_dt = 0.2222
//! single_qubit_ns = 35.55
//!
//! [readout]
//! epsilon = 0.02             # P(read 1 | prepared 0)
//! eta = 0.04                 # P(read 0 | prepared 1)
//!
//! [idle]
//! detuning_std = 1e-4        # rad/ns, quasi-static per trajectory and qubit
//! dephasing_rate = 0.0       # 1/ns, Markovian Z flips
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::pulse::{self, PulseParams};
use crate::model::RzzImpl;
use crate::qsim::density::depolarizing_probabilities;
use crate::qsim::{Gate, GateKind, PauliString};
use crate::{Error, Result};

/// Error model for two-qubit gates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum TwoQubitNoise {
    None,
    /// Depolarizing channel with PTM `diag(1, 1−p, ...)` after every gate.
    Depolarizing {
        p: f64,
    },
    /// Explicit Pauli-pair probabilities, e.g. `{ "XI" = 0.002, "ZZ" = 0.001 }`.
    Pauli {
        rates: BTreeMap<String, f64>,
    },
    /// Depolarizing with `p = 1 − exp(−duration/τ)`, `τ` fixed by `target_p`.
    DurationLaw {
        target_p: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReadoutNoise {
    /// `P(1 | 0)`.
    pub epsilon: f64,
    /// `P(0 | 1)`.
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct IdleNoise {
    /// Standard deviation of the quasi-static detuning, rad/ns.
    #[serde(default)]
    pub detuning_std: f64,
    /// Markovian dephasing rate, 1/ns.
    #[serde(default)]
    pub dephasing_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    #[serde(default = "default_name")]
    pub name: String,
    pub two_qubit: TwoQubitNoise,
    #[serde(default = "PulseParams::casablanca_like")]
    pub pulse: PulseParams,
    #[serde(default)]
    pub readout: ReadoutNoise,
    /// Per-qubit readout overrides; qubits beyond the list use `readout`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub readout_per_qubit: Vec<ReadoutNoise>,
    #[serde(default)]
    pub idle: IdleNoise,
    #[serde(default)]
    pub single_qubit_depolarizing: f64,
    /// Coherent over-rotation angle applied along each two-qubit gate's
    /// generator (`ZZ` for CNOT).
    #[serde(default)]
    pub coherent_overrotation: f64,
}

fn default_name() -> String {
    "custom".into()
}

pub const PRESETS: [&str; 2] = ["noiseless", "casablanca-like"];

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self {
            name: "noiseless".into(),
            two_qubit: TwoQubitNoise::None,
            pulse: PulseParams::casablanca_like(),
            readout: ReadoutNoise::default(),
            readout_per_qubit: Vec::new(),
            idle: IdleNoise::default(),
            single_qubit_depolarizing: 0.0,
            coherent_overrotation: 0.0,
        }
    }

    /// Default noisy device.
    pub fn casablanca_like() -> Self {
        Self {
            name: "casablanca-like".into(),
            two_qubit: TwoQubitNoise::DurationLaw { target_p: 0.016 },
            readout: ReadoutNoise {
                epsilon: 0.02,
                eta: 0.04,
            },
            idle: IdleNoise {
                detuning_std: 1e-4,
                dephasing_rate: 0.0,
            },
            ..Self::noiseless()
        }
    }

    /// Depolarizing two-qubit noise only.
    pub fn depolarizing(p: f64) -> Self {
        Self {
            name: format!("depolarizing-{p}"),
            two_qubit: TwoQubitNoise::Depolarizing { p },
            ..Self::noiseless()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "noiseless" => Ok(Self::noiseless()),
            "casablanca-like" => Ok(Self::casablanca_like()),
            other => Err(Error::UnknownPreset(other.into())),
        }
    }

    /// A preset name or a path to a TOML file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if name_or_path.ends_with(".toml") {
            Self::from_toml(&std::fs::read_to_string(Path::new(name_or_path))?)
        } else {
            Self::preset(name_or_path)
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn readout_for(&self, qubit: usize) -> ReadoutNoise {
        self.readout_per_qubit
            .get(qubit)
            .copied()
            .unwrap_or(self.readout)
    }

    pub fn has_readout_error(&self, width: usize) -> bool {
        (0..width).any(|q| {
            let r = self.readout_for(q);
            r.epsilon != 0.0 || r.eta != 0.0
        })
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |what: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidProbability(format!("{what} = {p}")))
            }
        };
        self.pulse.validate()?;
        for r in std::iter::once(&self.readout).chain(&self.readout_per_qubit) {
            prob("readout epsilon", r.epsilon)?;
            prob("readout eta", r.eta)?;
        }
        prob("single-qubit depolarizing", self.single_qubit_depolarizing)?;
        if !(self.idle.detuning_std >= 0.0 && self.idle.dephasing_rate >= 0.0) {
            return Err(Error::InvalidParameter(
                "idle noise rates must be nonnegative".into(),
            ));
        }
        if !self.coherent_overrotation.is_finite() {
            return Err(Error::NonFiniteAngle(self.coherent_overrotation));
        }
        match &self.two_qubit {
            TwoQubitNoise::None => {}
            TwoQubitNoise::Depolarizing { p } => {
                depolarizing_probabilities(2, *p)?;
            }
            TwoQubitNoise::DurationLaw { target_p } => {
                if !(0.0..1.0).contains(target_p) {
                    return Err(Error::InvalidProbability(format!("target_p = {target_p}")));
                }
            }
            TwoQubitNoise::Pauli { rates } => {
                pauli_rates_to_probabilities(rates)?;
            }
        }
        Ok(())
    }

    pub fn compile(&self) -> Result<NoiseModel> {
        self.validate()?;
        let tau = match self.two_qubit {
            TwoQubitNoise::DurationLaw { target_p } if target_p > 0.0 => {
                let reference = pulse::rzz_duration(2.0, RzzImpl::TwoCnot, &self.pulse);
                Some(-reference / (1.0 - target_p).ln())
            }
            _ => None,
        };
        let fixed = match &self.two_qubit {
            TwoQubitNoise::Depolarizing { p } if *p > 0.0 => {
                Some(depolarizing_probabilities(2, *p)?)
            }
            TwoQubitNoise::Pauli { rates } => Some(pauli_rates_to_probabilities(rates)?),
            _ => None,
        };
        Ok(NoiseModel {
            spec: self.clone(),
            tau,
            fixed,
        })
    }
}

fn pauli_rates_to_probabilities(rates: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
    let mut probs = vec![0.0; 16];
    for (label, &p) in rates {
        let s: PauliString = label.parse()?;
        if s.width() != 2 || s.index() == 0 {
            return Err(Error::InvalidParameter(format!(
                "two-qubit Pauli label `{label}`"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(format!("{label} = {p}")));
        }
        probs[s.index()] += p;
    }
    let total: f64 = probs.iter().sum();
    if total > 1.0 {
        return Err(Error::InvalidProbability(format!(
            "Pauli rates sum to {total}"
        )));
    }
    probs[0] = 1.0 - total;
    Ok(probs)
}

/// `p = 1 − exp(−duration/τ)`.
pub fn gate_error_rate(duration: f64, tau: f64) -> f64 {
    if duration <= 0.0 {
        0.0
    } else {
        1.0 - (-duration / tau).exp()
    }
}

/// Noise spec with derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    spec: NoiseSpec,
    tau: Option<f64>,
    fixed: Option<Vec<f64>>,
}

impl NoiseModel {
    pub fn spec(&self) -> &NoiseSpec {
        &self.spec
    }

    /// Error time constant of the duration law, in ns.
    pub fn tau(&self) -> Option<f64> {
        self.tau
    }

    /// Scheduled duration of `gate` in ns. Virtual `Z`-type rotations and
    /// Pauli gates (merged into neighboring single-qubit layers) take no time.
    pub fn gate_duration(&self, gate: &Gate) -> f64 {
        let pp = &self.spec.pulse;
        match gate {
            Gate::Rz { .. } | Gate::Z(_) | Gate::S(_) | Gate::Sdg(_) | Gate::X(_) | Gate::Y(_) => {
                0.0
            }
            Gate::Rx { .. } | Gate::Ry { .. } | Gate::H(_) => pp.single_qubit_ns,
            Gate::Cnot { .. } => pulse::cnot_duration(pp),
            Gate::Rzx { theta, .. } => pulse::rzx_duration(*theta, pp),
            Gate::Rzz { theta, .. } => pulse::rzz_duration(*theta, RzzImpl::Native, pp),
            Gate::Unitary { qubits, .. } => match qubits.len() {
                1 => pp.single_qubit_ns,
                _ => pulse::cnot_duration(pp),
            },
            Gate::Delay { ns, .. } => *ns,
        }
    }

    /// True when execution involves no randomness, so one trajectory suffices.
    pub fn is_deterministic(&self) -> bool {
        let s = &self.spec;
        self.fixed.is_none()
            && self.tau.is_none()
            && s.single_qubit_depolarizing == 0.0
            && s.idle.detuning_std == 0.0
            && s.idle.dephasing_rate == 0.0
    }

    /// Depolarizing parameter of the duration law for a given duration.
    pub fn duration_error_rate(&self, duration: f64) -> f64 {
        self.tau.map_or(0.0, |tau| gate_error_rate(duration, tau))
    }

    /// Modeled error probability of one `R_ZZ(θ)` in a given compilation.
    pub fn rzz_error_rate(&self, theta: f64, imp: RzzImpl) -> f64 {
        self.duration_error_rate(pulse::rzz_duration(theta, imp, &self.spec.pulse))
    }

    /// Pauli-string probabilities (base-4 index order) of the stochastic error
    /// following `gate`, or `None` if the gate is noiseless.
    pub fn pauli_error(&self, gate: &Gate) -> Option<Vec<f64>> {
        match gate.qubits().len() {
            2 => {
                if let Some(f) = &self.fixed {
                    return Some(f.clone());
                }
                let p = self.duration_error_rate(self.gate_duration(gate));
                (p > 0.0).then(|| depolarizing_probabilities(2, p).expect("p < 1"))
            }
            1 if gate.kind() != GateKind::Delay && self.spec.single_qubit_depolarizing > 0.0 => {
                Some(
                    depolarizing_probabilities(1, self.spec.single_qubit_depolarizing)
                        .expect("validated"),
                )
            }
            _ => None,
        }
    }

    /// Coherent error unitary generator and angle following a two-qubit gate.
    pub fn coherent_error(&self, gate: &Gate) -> Option<(PauliString, f64)> {
        let delta = self.spec.coherent_overrotation;
        if delta == 0.0 || !gate.is_two_qubit() {
            return None;
        }
        let generator = gate
            .generator()
            .unwrap_or_else(|| "ZZ".parse().expect("valid"));
        Some((generator, delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duration_law_calibration() {
        let m = NoiseSpec::casablanca_like().compile().unwrap();
        assert!((m.rzz_error_rate(2.0, RzzImpl::TwoCnot) - 0.016).abs() < 1e-12);
        for theta in [0.2, 1.0, 2.0, 2.4] {
            assert!(
                m.rzz_error_rate(theta, RzzImpl::ScaledRzx)
                    < m.rzz_error_rate(theta, RzzImpl::TwoCnot)
            );
        }
        assert_eq!(gate_error_rate(0.0, 100.0), 0.0);
        let small = gate_error_rate(1.0, 1e4);
        let half = gate_error_rate(0.5, 1e4);
        assert!((half / small - 0.5).abs() < 0.05 * 0.5);
    }

    #[test]
    fn toml_round_trip() {
        let spec = NoiseSpec::casablanca_like();
        let text = spec.to_toml().unwrap();
        assert_eq!(NoiseSpec::from_toml(&text).unwrap(), spec);
        let custom = r#"
            [two_qubit]
            model = "pauli"
            rates = { XI = 0.01, ZZ = 0.02 }
            [readout]
            epsilon = 0.1
            eta = 0.05
        "#;
        let s = NoiseSpec::from_toml(custom).unwrap();
        let probs = s
            .compile()
            .unwrap()
            .pauli_error(&Gate::Cnot {
                control: 0,
                target: 1,
            })
            .unwrap();
        assert!((probs[0] - 0.97).abs() < 1e-12);
        assert!((probs[4] - 0.01).abs() < 1e-12);
        assert!((probs[15] - 0.02).abs() < 1e-12);
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut s = NoiseSpec::noiseless();
        s.readout.epsilon = 1.5;
        assert!(s.validate().is_err());
        let bad = NoiseSpec {
            two_qubit: TwoQubitNoise::Pauli {
                rates: BTreeMap::from([("XX".to_string(), 0.7), ("YY".to_string(), 0.6)]),
            },
            ..NoiseSpec::noiseless()
        };
        assert!(bad.compile().is_err());
        assert!(matches!(
            NoiseSpec::preset("nope"),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn virtual_gates_take_no_time() {
        let m = NoiseSpec::casablanca_like().compile().unwrap();
        assert_eq!(
            m.gate_duration(&Gate::Rz {
                qubit: 0,
                theta: 1.0
            }),
            0.0
        );
        assert!(
            m.gate_duration(&Gate::Rx {
                qubit: 0,
                theta: 1.0
            }) > 0.0
        );
        assert!(m.pauli_error(&Gate::H(0)).is_none());
    }
}
