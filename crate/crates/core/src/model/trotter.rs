use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::params::{ModelParams, RzzImpl, TrotterOptions};
use crate::qsim::{Circuit, Gate, Statevector};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NeelVariant {
    /// `|0101...⟩`: excitations on even sites.
    #[default]
    Z2,
    /// `|1010...⟩`.
    Z2Prime,
}

impl NeelVariant {
    /// Whether qubit `q` (site `q + 1`) is excited.
    pub fn is_excited(self, q: usize) -> bool {
        let even_site = (q + 1).is_multiple_of(2);
        match self {
            NeelVariant::Z2 => even_site,
            NeelVariant::Z2Prime => !even_site,
        }
    }

    pub fn bitstring(self, sites: usize) -> String {
        (0..sites)
            .map(|q| if self.is_excited(q) { '1' } else { '0' })
            .collect()
    }
}

/// `X` gates preparing the Néel state from `|0...0⟩`.
pub fn neel_prep(sites: usize, variant: NeelVariant) -> Circuit {
    Circuit::from_gates(
        sites,
        (0..sites).filter(|&q| variant.is_excited(q)).map(Gate::X),
    )
    .expect("prep gates are in range")
}

pub fn neel_state(sites: usize, variant: NeelVariant) -> Statevector {
    Statevector::from_bitstring(&variant.bitstring(sites)).expect("valid bitstring")
}

/// Gates realizing `R_ZZ(θ)` on bond `(a, b)`.
pub fn rzz_gates(a: usize, b: usize, theta: f64, imp: RzzImpl) -> Vec<Gate> {
    match imp {
        RzzImpl::Native => vec![Gate::Rzz { a, b, theta }],
        RzzImpl::TwoCnot => vec![
            Gate::Cnot {
                control: a,
                target: b,
            },
            Gate::Rz { qubit: b, theta },
            Gate::Cnot {
                control: a,
                target: b,
            },
        ],
        RzzImpl::ScaledRzx => vec![
            Gate::Ry {
                qubit: b,
                theta: FRAC_PI_2,
            },
            Gate::Rzx {
                control: a,
                target: b,
                theta,
            },
            Gate::Ry {
                qubit: b,
                theta: -FRAC_PI_2,
            },
        ],
    }
}

/// One first-order step: `R_X` layer, `R_Z` layer (halved at the edges), then
/// the bond rotations.
pub fn build_trotter_step(p: &ModelParams, opts: TrotterOptions) -> Result<Circuit> {
    p.validate()?;
    let l = p.sites;
    let a = p.angles();
    let mut c = Circuit::new(l);
    for q in 0..l {
        c.push(Gate::Rx {
            qubit: q,
            theta: a.theta_x,
        })?;
    }
    for q in 0..l {
        let theta = if q == 0 || q == l - 1 {
            a.theta_z_edge
        } else {
            a.theta_z_bulk
        };
        c.push(Gate::Rz { qubit: q, theta })?;
    }
    for (left, right) in opts.schedule.bonds(l) {
        for g in rzz_gates(left, right, a.theta_zz, opts.rzz_impl) {
            c.push(g)?;
        }
    }
    Ok(c)
}

/// Néel preparation followed by `steps` Trotter steps.
pub fn trotter_circuit(
    p: &ModelParams,
    opts: TrotterOptions,
    steps: usize,
    variant: NeelVariant,
) -> Result<Circuit> {
    let step = build_trotter_step(p, opts)?;
    let mut c = neel_prep(p.sites, variant);
    for _ in 0..steps {
        c.append(&step)?;
    }
    Ok(c)
}
