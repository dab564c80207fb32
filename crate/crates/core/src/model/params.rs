use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Nearest-neighbor interaction strength.
    pub v: f64,
    /// Transverse field.
    pub omega: f64,
    /// Trotter step.
    pub dt: f64,
    pub sites: usize,
}

impl ModelParams {
    pub fn new(v: f64, omega: f64, dt: f64, sites: usize) -> Result<Self> {
        let p = Self {
            v,
            omega,
            dt,
            sites,
        };
        p.validate()?;
        Ok(p)
    }

    /// Scar regime: `V = 1, Ω = 0.24, Δt = 1`.
    pub fn scar(sites: usize) -> Self {
        Self {
            v: 1.0,
            omega: 0.24,
            dt: 1.0,
            sites,
        }
    }

    /// Chaotic regime: `V = 1, Ω = 2, Δt = 0.16`.
    pub fn chaotic(sites: usize) -> Self {
        Self {
            v: 1.0,
            omega: 2.0,
            dt: 0.16,
            sites,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v.is_finite() && self.omega.is_finite() && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(
                "V, Omega and dt must be finite".into(),
            ));
        }
        if self.sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "chain needs at least 2 sites, got {}",
                self.sites
            )));
        }
        Ok(())
    }

    pub fn angles(&self) -> TrotterAngles {
        TrotterAngles {
            theta_x: 2.0 * self.omega * self.dt,
            theta_z_bulk: -4.0 * self.v * self.dt,
            theta_z_edge: -2.0 * self.v * self.dt,
            theta_zz: 2.0 * self.v * self.dt,
        }
    }
}

/// Rotation angles of one Trotter step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterAngles {
    pub theta_x: f64,
    pub theta_z_bulk: f64,
    pub theta_z_edge: f64,
    pub theta_zz: f64,
}

/// How an `R_ZZ` bond rotation is compiled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RzzImpl {
    /// `CNOT · R_Z(θ) · CNOT`.
    TwoCnot,
    /// `R_Y(-π/2) · R_ZX(θ) · R_Y(π/2)` on the target.
    #[default]
    ScaledRzx,
    /// A single native `R_ZZ` gate.
    Native,
}

impl RzzImpl {
    pub const ALL: [RzzImpl; 3] = [RzzImpl::TwoCnot, RzzImpl::ScaledRzx, RzzImpl::Native];

    pub fn name(self) -> &'static str {
        match self {
            RzzImpl::TwoCnot => "two-cnot",
            RzzImpl::ScaledRzx => "scaled-rzx",
            RzzImpl::Native => "native",
        }
    }
}

impl fmt::Display for RzzImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RzzImpl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown R_ZZ implementation `{s}`")))
    }
}

/// Order in which the commuting bond rotations are emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BondSchedule {
    /// Bonds (1,2), (3,4), ... then (2,3), (4,5), ...
    #[default]
    EvenOdd,
    OddEven,
    /// Left to right.
    Sequential,
}

impl BondSchedule {
    /// Bonds as `(left, right)` qubit pairs.
    pub fn bonds(self, sites: usize) -> Vec<(usize, usize)> {
        let first: Vec<_> = (0..sites - 1).step_by(2).map(|a| (a, a + 1)).collect();
        let second: Vec<_> = (1..sites - 1).step_by(2).map(|a| (a, a + 1)).collect();
        match self {
            BondSchedule::EvenOdd => [first, second].concat(),
            BondSchedule::OddEven => [second, first].concat(),
            BondSchedule::Sequential => (0..sites - 1).map(|a| (a, a + 1)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TrotterOptions {
    #[serde(default)]
    pub rzz_impl: RzzImpl,
    #[serde(default)]
    pub schedule: BondSchedule,
}

impl TrotterOptions {
    pub fn with_impl(rzz_impl: RzzImpl) -> Self {
        Self {
            rzz_impl,
            ..Self::default()
        }
    }
}
