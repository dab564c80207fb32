//! Connected unequal-time correlator `C_Y(t) = ⟨Y_π(t) Y_π(0)⟩` measured
//! without ancillas.
//!
//! For each even source site `i` four branches are prepared on qubit `i`:
//! the two `Y` eigenstates and the two `±π/4` rotations about `Y`. After the
//! Trotter evolution all `(PYP)_j` of one parity are read from a single
//! measurement setting, giving `4 × 2 × ⌊L/2⌋` settings per time step.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{
    build_trotter_step, neel_prep, neel_state, ModelParams, NeelVariant, TrotterOptions,
};
use crate::qsim::dense::{self, CMatrix};
use crate::qsim::{bit_mask, Circuit, Counts, Gate, Pauli, Statevector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub const ALL: [Parity; 2] = [Parity::Odd, Parity::Even];

    /// 1-based sites of this parity on a chain of `sites`.
    pub fn sites(self, sites: usize) -> Vec<usize> {
        let first = match self {
            Parity::Odd => 1,
            Parity::Even => 2,
        };
        (first..=sites).step_by(2).collect()
    }

    pub fn of(site: usize) -> Parity {
        if site.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyBranch {
    /// Source qubit in the `Y = +1` eigenstate.
    PlusEigen,
    MinusEigen,
    /// `e^{+iπY/4}` applied to the source qubit.
    PlusRotation,
    MinusRotation,
}

impl CyBranch {
    pub const ALL: [CyBranch; 4] = [
        CyBranch::PlusEigen,
        CyBranch::MinusEigen,
        CyBranch::PlusRotation,
        CyBranch::MinusRotation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CyBranch::PlusEigen => "M=+1",
            CyBranch::MinusEigen => "M=-1",
            CyBranch::PlusRotation => "+Y",
            CyBranch::MinusRotation => "-Y",
        }
    }

    /// Gates on the source qubit, which holds `|1⟩` after Néel preparation.
    pub fn prep_gates(self, qubit: usize) -> Vec<Gate> {
        match self {
            CyBranch::PlusEigen => vec![Gate::X(qubit), Gate::H(qubit), Gate::S(qubit)],
            CyBranch::MinusEigen => vec![Gate::H(qubit), Gate::S(qubit)],
            CyBranch::PlusRotation => vec![Gate::Ry {
                qubit,
                theta: -FRAC_PI_2,
            }],
            CyBranch::MinusRotation => vec![Gate::Ry {
                qubit,
                theta: FRAC_PI_2,
            }],
        }
    }
}

fn check_source(sites: usize, site: usize) -> Result<()> {
    if site == 0 || site > sites {
        return Err(Error::QubitOutOfRange {
            qubit: site.wrapping_sub(1),
            width: sites,
        });
    }
    if !site.is_multiple_of(2) {
        return Err(Error::OddSource(site));
    }
    Ok(())
}

/// Néel preparation followed by the branch gates on source `site` (1-based).
pub fn cy_prep(sites: usize, site: usize, branch: CyBranch) -> Result<Circuit> {
    check_source(sites, site)?;
    let mut c = neel_prep(sites, NeelVariant::Z2);
    for g in branch.prep_gates(site - 1) {
        c.push(g)?;
    }
    Ok(c)
}

/// The four branch circuits for one source, each followed by `steps` Trotter
/// steps.
pub fn build_cy_circuits(
    p: &ModelParams,
    opts: TrotterOptions,
    steps: usize,
    site: usize,
) -> Result<Vec<(CyBranch, Circuit)>> {
    let step = build_trotter_step(p, opts)?;
    CyBranch::ALL
        .iter()
        .map(|&b| {
            let mut c = cy_prep(p.sites, site, b)?;
            for _ in 0..steps {
                c.append(&step)?;
            }
            Ok((b, c))
        })
        .collect()
}

/// `S†` then `H` on every qubit of `parity`, mapping `Y` to `Z`.
pub fn measurement_basis(sites: usize, parity: Parity) -> Result<Circuit> {
    let rotated = parity.sites(sites);
    for w in rotated.windows(2) {
        if w[1] - w[0] < 2 {
            return Err(Error::ParityOverlap(w[1]));
        }
    }
    let mut c = Circuit::new(sites);
    for s in rotated {
        c.push(Gate::Sdg(s - 1))?;
        c.push(Gate::H(s - 1))?;
    }
    Ok(c)
}

/// Neighbor qubits of 1-based `site`.
fn neighbors(sites: usize, site: usize) -> Vec<usize> {
    let q = site - 1;
    let mut n = Vec::with_capacity(2);
    if q > 0 {
        n.push(q - 1);
    }
    if q + 1 < sites {
        n.push(q + 1);
    }
    n
}

/// `⟨(PYP)_j⟩` for every site `j` of `parity`, from counts measured after
/// [`measurement_basis`]. Returned as `(site, value)`.
pub fn pyp_expectation(counts: &Counts, parity: Parity) -> Result<Vec<(usize, f64)>> {
    let width = counts.width();
    parity
        .sites(width)
        .into_iter()
        .map(|site| {
            let nb_mask: usize = neighbors(width, site)
                .into_iter()
                .map(|q| bit_mask(width, q))
                .sum();
            let own = bit_mask(width, site - 1);
            let v = counts.mean_of(|i| {
                if i & nb_mask != 0 {
                    0.0
                } else if i & own != 0 {
                    -1.0
                } else {
                    1.0
                }
            })?;
            Ok((site, v))
        })
        .collect()
}

/// `(PYP)_site |ψ⟩` on raw amplitudes.
pub fn apply_pyp(amps: &[Complex64], width: usize, site: usize) -> Vec<Complex64> {
    let nb_mask: usize = neighbors(width, site)
        .into_iter()
        .map(|q| bit_mask(width, q))
        .sum();
    let own = bit_mask(width, site - 1);
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (i, a) in amps.iter().enumerate() {
        if i & nb_mask != 0 {
            continue;
        }
        // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
        let phase = if i & own == 0 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(0.0, -1.0)
        };
        out[i ^ own] += phase * a;
    }
    out
}

/// `Y_π |ψ⟩ = Σ_j (−1)^j (PYP)_j |ψ⟩` on raw amplitudes.
pub fn apply_y_pi(amps: &[Complex64], width: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for site in 1..=width {
        let sign = if site % 2 == 0 { 1.0 } else { -1.0 };
        for (o, v) in out.iter_mut().zip(apply_pyp(amps, width, site)) {
            *o += sign * v;
        }
    }
    out
}

pub fn pyp_expectation_state(state: &Statevector, site: usize) -> f64 {
    let applied = apply_pyp(state.amplitudes(), state.width(), site);
    state
        .amplitudes()
        .iter()
        .zip(&applied)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .re
}

/// Dense `(PYP)_site` for small chains.
pub fn pyp_operator(sites: usize, site: usize) -> CMatrix {
    let projector = dense::from_rows(&[&[dense::ONE, dense::ZERO], &[dense::ZERO, dense::ZERO]]);
    let mut op = dense::embed(&Pauli::Y.matrix(), &[site - 1], sites);
    for q in neighbors(sites, site) {
        op = dense::embed(&projector, &[q], sites) * op;
    }
    op
}

/// Measurement settings of one time step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyPlan {
    pub sites: usize,
    pub sources: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CySetting {
    pub source: usize,
    pub branch: CyBranch,
    pub parity: Parity,
}

impl CyPlan {
    pub fn new(sites: usize) -> Self {
        Self {
            sites,
            sources: Parity::Even.sites(sites),
        }
    }

    pub fn settings(&self) -> Vec<CySetting> {
        let mut out = Vec::with_capacity(self.len());
        for &source in &self.sources {
            for branch in CyBranch::ALL {
                for parity in Parity::ALL {
                    out.push(CySetting {
                        source,
                        branch,
                        parity,
                    });
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        8 * self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }
}

/// `⟨(PYP)_j⟩` per `(source, branch)`, indexed by qubit `j − 1`.
pub type BranchValues = BTreeMap<(usize, CyBranch), Vec<f64>>;

/// Local correlator `⟨Z2|(PYP)_j(t) Y_i|Z2⟩` from the four branch values.
pub fn local_correlator(plus: f64, minus: f64, rot_plus: f64, rot_minus: f64) -> Complex64 {
    Complex64::new(0.5 * (plus - minus), -0.5 * (rot_plus - rot_minus))
}

/// `C_Y = Σ_j Σ_{i even} (−1)^{i+j} ⟨Z2|(PYP)_j(t) Y_i|Z2⟩`.
pub fn assemble_cy(values: &BranchValues, sites: usize) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for source in Parity::Even.sites(sites) {
        let get = |b: CyBranch| -> Result<&Vec<f64>> {
            values
                .get(&(source, b))
                .filter(|v| v.len() == sites)
                .ok_or(Error::MissingBranch {
                    site: source,
                    branch: b.name().into(),
                })
        };
        let (p, m, rp, rm) = (
            get(CyBranch::PlusEigen)?,
            get(CyBranch::MinusEigen)?,
            get(CyBranch::PlusRotation)?,
            get(CyBranch::MinusRotation)?,
        );
        for q in 0..sites {
            let sign = if (source + q + 1) % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * local_correlator(p[q], m[q], rp[q], rm[q]);
        }
    }
    Ok(total)
}

/// Noiseless infinite-shot protocol: every setting is simulated exactly and
/// read out through [`pyp_expectation`]. Returns `C_Y` at steps `0..=steps`.
pub fn cy_protocol_noiseless(
    p: &ModelParams,
    opts: TrotterOptions,
    steps: usize,
) -> Result<Vec<Complex64>> {
    let sites = p.sites;
    let step = build_trotter_step(p, opts)?;
    let bases: Vec<(Parity, Circuit)> = Parity::ALL
        .iter()
        .map(|&par| measurement_basis(sites, par).map(|c| (par, c)))
        .collect::<Result<_>>()?;
    let mut per_step = vec![BranchValues::new(); steps + 1];
    for source in Parity::Even.sites(sites) {
        for branch in CyBranch::ALL {
            let mut state = Statevector::zero(sites);
            state.run(&cy_prep(sites, source, branch)?)?;
            for values in per_step.iter_mut() {
                let mut v = vec![0.0; sites];
                for (_, basis) in &bases {
                    let mut rotated = state.clone();
                    rotated.run(basis)?;
                    let counts = Counts::from_probabilities(sites, &rotated.probabilities(), 1);
                    for par in Parity::ALL {
                        if basis
                            .gates()
                            .iter()
                            .any(|g| Parity::of(g.qubits()[0] + 1) == par)
                        {
                            for (site, x) in pyp_expectation(&counts, par)? {
                                v[site - 1] = x;
                            }
                        }
                    }
                }
                values.insert((source, branch), v);
                state.run(&step)?;
            }
        }
    }
    per_step.iter().map(|v| assemble_cy(v, sites)).collect()
}

/// Two-time correlator oracle `⟨Z2| U^{†n} Y_π U^n Y_π |Z2⟩` for `n = 0..=steps`.
pub fn cy_oracle(p: &ModelParams, opts: TrotterOptions, steps: usize) -> Result<Vec<Complex64>> {
    let sites = p.sites;
    let step = build_trotter_step(p, opts)?;
    let mut left = neel_state(sites, NeelVariant::Z2);
    let kicked = apply_y_pi(left.amplitudes(), sites);
    let norm = kicked.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut right = Statevector::from_unnormalized(sites, kicked);
    let mut out = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        if n > 0 {
            left.run(&step)?;
            right.run(&step)?;
        }
        let applied = apply_y_pi(right.amplitudes(), sites);
        let v: Complex64 = left
            .amplitudes()
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum();
        out.push(v * norm);
    }
    Ok(out)
}
