//! Square-Gaussian cross-resonance pulse scaling.
//!
//! A CR pulse is a flat top of width `W` samples and amplitude `|A|` with
//! Gaussian flanks of width `σ` truncated at `n_σ σ`. Its rotation angle is
//! proportional to the enclosed area. Angles above a threshold are reached by
//! shrinking `W`; below it the flat top vanishes and `|A|` is reduced.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::model::RzzImpl;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    /// `|A(π/2)|`, dimensionless drive amplitude.
    pub amp_ref: f64,
    /// `W(π/2)` in samples.
    pub width_ref: f64,
    /// Gaussian standard deviation in samples.
    pub sigma: f64,
    pub n_sigma: f64,
    /// Nanoseconds per sample.
    pub sample_dt: f64,
    /// Duration of a physical single-qubit pulse in ns.
    pub single_qubit_ns: f64,
}

impl PulseParams {
    pub fn casablanca_like() -> Self {
        Self {
            amp_ref: 0.25,
            width_ref: 560.0,
            sigma: 64.0,
            n_sigma: 2.0,
            sample_dt: 0.2222,
            single_qubit_ns: 35.55,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.amp_ref,
            self.width_ref,
            self.sigma,
            self.sample_dt,
            self.single_qubit_ns,
        ];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0)
            || self.amp_ref == 0.0
            || self.sigma == 0.0
            || self.sample_dt == 0.0
            || !(self.n_sigma >= 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "pulse parameters {self:?}"
            )));
        }
        Ok(())
    }

    /// Area of the unit-amplitude Gaussian flanks, `σ√(2π) erf(n_σ)`.
    fn flank_area(&self) -> f64 {
        self.sigma * (2.0 * PI).sqrt() * erf(self.n_sigma)
    }

    /// Samples spent in the two Gaussian flanks.
    fn flank_samples(&self) -> f64 {
        2.0 * self.n_sigma * self.sigma
    }
}

/// Area `α = |A|W + |A|σ√(2π) erf(n_σ)` of the reference pulse.
pub fn pulse_area(pp: &PulseParams) -> f64 {
    pp.amp_ref * pp.width_ref + pp.amp_ref * pp.flank_area()
}

/// Angle below which the flat top vanishes and amplitude scaling takes over.
pub fn threshold(pp: &PulseParams) -> f64 {
    FRAC_PI_2 / pulse_area(pp) * pp.amp_ref * pp.flank_area()
}

/// Flat-top width for angle `theta`; zero at or below the threshold.
pub fn scaled_width(theta: f64, pp: &PulseParams) -> f64 {
    let w = 2.0 * pulse_area(pp) * theta.abs() / (PI * pp.amp_ref) - pp.flank_area();
    w.max(0.0)
}

/// Amplitude for angles at or below the threshold.
pub fn scaled_amplitude(theta: f64, pp: &PulseParams) -> Result<f64> {
    let th = threshold(pp);
    if theta.abs() > th * (1.0 + 1e-12) {
        return Err(Error::AboveThreshold {
            theta,
            threshold: th,
        });
    }
    Ok(2.0 * pulse_area(pp) * theta.abs() / (PI * pp.flank_area()))
}

/// Length in ns of one CR pulse rotating by `theta`.
pub fn cr_pulse_ns(theta: f64, pp: &PulseParams) -> f64 {
    (scaled_width(theta, pp) + pp.flank_samples()) * pp.sample_dt
}

/// Echoed `R_ZX(θ)`: two CR pulses and an echo pulse on the control.
pub fn rzx_duration(theta: f64, pp: &PulseParams) -> f64 {
    2.0 * cr_pulse_ns(theta, pp) + pp.single_qubit_ns
}

/// CNOT built from `R_ZX(π/2)` plus single-qubit dressing.
pub fn cnot_duration(pp: &PulseParams) -> f64 {
    rzx_duration(FRAC_PI_2, pp) + pp.single_qubit_ns
}

/// Total duration of one `R_ZZ(θ)` in the given compilation.
pub fn rzz_duration(theta: f64, imp: RzzImpl, pp: &PulseParams) -> f64 {
    match imp {
        RzzImpl::TwoCnot => 2.0 * cnot_duration(pp),
        RzzImpl::ScaledRzx | RzzImpl::Native => rzx_duration(theta, pp) + 2.0 * pp.single_qubit_ns,
    }
}
