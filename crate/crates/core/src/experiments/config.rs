//! Experiment configuration, read from TOML and overridable field by field.
//!
//! ```toml
//! sites = 12
//! steps = 39
//! dt = 1.0
//! v = 1.0
//! omega = 0.24
//! rzz_impl = "scaled-rzx"
//! noise_preset = "casablanca-like"
//! shots = 8192
//! infinite_shots = false
//! trajectories = 32
//! twirls = 10
//! zne_factors = [1.0, 1.5, 2.0]
//! readout_mode = "tensor"
//! postselect = true
//! dd = false
//! seed = 1
//! trials = 1
//! format = "csv"
//!
//! [noise]
//! readout_epsilon = 0.05
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::mitigation::ReadoutMode;
use crate::model::{BondSchedule, ModelParams, RzzImpl, TrotterOptions};
use crate::noise::{NoiseSpec, TwoQubitNoise};
use crate::qsim::Shots;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Parameter sets used for the correlator runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    #[default]
    Scar,
    Chaotic,
}

impl Regime {
    /// `(V, Ω, Δt)`.
    pub fn parameters(self) -> (f64, f64, f64) {
        match self {
            Regime::Scar => (1.0, 0.24, 1.0),
            Regime::Chaotic => (1.0, 2.0, 0.16),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scar" => Ok(Self::Scar),
            "chaotic" => Ok(Self::Chaotic),
            other => Err(Error::Config(format!("unknown regime `{other}`"))),
        }
    }
}

/// Field-wise changes applied on top of the named noise preset.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseOverrides {
    /// Replaces the two-qubit model with fixed depolarizing noise.
    pub two_qubit_depolarizing: Option<f64>,
    /// Recalibrates the duration law to this error at the reference gate.
    pub target_p: Option<f64>,
    pub readout_epsilon: Option<f64>,
    pub readout_eta: Option<f64>,
    pub detuning_std: Option<f64>,
    pub dephasing_rate: Option<f64>,
    pub single_qubit_depolarizing: Option<f64>,
    pub coherent_overrotation: Option<f64>,
}

impl NoiseOverrides {
    pub fn apply(&self, spec: &mut NoiseSpec) {
        if let Some(p) = self.two_qubit_depolarizing {
            spec.two_qubit = TwoQubitNoise::Depolarizing { p };
        }
        if let Some(target_p) = self.target_p {
            spec.two_qubit = TwoQubitNoise::DurationLaw { target_p };
        }
        if let Some(e) = self.readout_epsilon {
            spec.readout.epsilon = e;
        }
        if let Some(e) = self.readout_eta {
            spec.readout.eta = e;
        }
        if let Some(d) = self.detuning_std {
            spec.idle.detuning_std = d;
        }
        if let Some(d) = self.dephasing_rate {
            spec.idle.dephasing_rate = d;
        }
        if let Some(p) = self.single_qubit_depolarizing {
            spec.single_qubit_depolarizing = p;
        }
        if let Some(d) = self.coherent_overrotation {
            spec.coherent_overrotation = d;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sites: usize,
    pub steps: usize,
    pub dt: f64,
    pub v: f64,
    pub omega: f64,
    pub rzz_impl: RzzImpl,
    pub schedule: BondSchedule,
    /// Preset name or path to a noise TOML file.
    pub noise_preset: String,
    pub noise: NoiseOverrides,
    /// Shots per circuit variant and time step.
    pub shots: u64,
    pub infinite_shots: bool,
    /// Noise trajectories per circuit variant.
    pub trajectories: usize,
    /// Pauli-twirl instances per scale factor; 0 disables twirling.
    pub twirls: usize,
    pub zne_factors: Vec<f64>,
    pub zne_weighted: bool,
    pub readout_mode: ReadoutMode,
    /// Shots per calibration circuit; defaults to `shots`.
    pub calibration_shots: Option<u64>,
    pub postselect: bool,
    pub dd: bool,
    pub seed: u64,
    pub trials: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sites: 12,
            steps: 39,
            dt: 1.0,
            v: 1.0,
            omega: 0.24,
            rzz_impl: RzzImpl::ScaledRzx,
            schedule: BondSchedule::EvenOdd,
            noise_preset: "casablanca-like".into(),
            noise: NoiseOverrides::default(),
            shots: 8192,
            infinite_shots: false,
            trajectories: 32,
            twirls: 10,
            zne_factors: vec![1.0, 1.5, 2.0],
            zne_weighted: true,
            readout_mode: ReadoutMode::Tensor,
            calibration_shots: None,
            postselect: true,
            dd: false,
            seed: 0,
            trials: 1,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    /// All mitigation stages off.
    pub fn unmitigated(mut self) -> Self {
        self.twirls = 0;
        self.zne_factors = vec![1.0];
        self.readout_mode = ReadoutMode::Off;
        self.postselect = false;
        self.dd = false;
        self
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.model_params()?;
        if self.shots == 0 {
            return Err(Error::ZeroShots);
        }
        if self.trajectories == 0 || self.trials == 0 {
            return Err(Error::Config(
                "trajectories and trials must be at least 1".into(),
            ));
        }
        if self.calibration_shots == Some(0) {
            return Err(Error::ZeroShots);
        }
        self.zne().validate()?;
        self.noise_spec()?;
        Ok(())
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        ModelParams::new(self.v, self.omega, self.dt, self.sites)
    }

    pub fn trotter_options(&self) -> TrotterOptions {
        TrotterOptions {
            rzz_impl: self.rzz_impl,
            schedule: self.schedule,
        }
    }

    pub fn noise_spec(&self) -> Result<NoiseSpec> {
        let mut spec = NoiseSpec::resolve(&self.noise_preset)?;
        self.noise.apply(&mut spec);
        spec.validate()?;
        Ok(spec)
    }

    pub fn shots(&self) -> Shots {
        if self.infinite_shots {
            Shots::Infinite(self.shots)
        } else {
            Shots::Finite(self.shots)
        }
    }

    pub fn calibration_shots(&self) -> Shots {
        match (self.infinite_shots, self.calibration_shots) {
            (true, c) => Shots::Infinite(c.unwrap_or(self.shots)),
            (false, c) => Shots::Finite(c.unwrap_or(self.shots)),
        }
    }

    /// Twirl instances actually run per scale factor.
    pub fn instances(&self) -> usize {
        self.twirls.max(1)
    }

    pub fn zne(&self) -> crate::mitigation::ZneConfig {
        crate::mitigation::ZneConfig {
            scale_factors: self.zne_factors.clone(),
            folds_seed: self.seed,
            twirl_instances: self.instances(),
            weighted: self.zne_weighted,
        }
    }

    /// `V t` at a step.
    pub fn vt(&self, step: usize) -> f64 {
        self.v * self.dt * step as f64
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        (self.v, self.omega, self.dt) = regime.parameters();
        self
    }
}
