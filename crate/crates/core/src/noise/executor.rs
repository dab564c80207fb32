//! Noisy circuit execution.
//!
//! [`run_trajectories`] unravels the Pauli channels into pure-state
//! trajectories: after every noisy gate one Pauli string is sampled, and each
//! trajectory draws its own quasi-static detuning per qubit that acts during
//! `Delay` gates. [`run_density`] evolves the exact mixed state for up to four
//! qubits and serves as the reference.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::channel::{noisy_gate_channel, rotation_gate};
use super::spec::NoiseModel;
use crate::qsim::counts::sample_probabilities;
use crate::qsim::density::DensityOperator;
use crate::qsim::{Circuit, Counts, Gate, KrausChannel, Pauli, PauliString, Shots, Statevector};
use crate::{seed, Error, Result};

/// Trajectories per parallel work unit; partial sums are combined in a fixed
/// order so results do not depend on the thread count.
const GROUP: usize = 8;
const SHOT_TAG: u64 = 0x5A0F;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOptions {
    pub trajectories: usize,
    pub shots: Shots,
    pub seed: u64,
}

#[derive(Debug, Clone)]
enum GateNoise {
    None,
    /// Cumulative Pauli probabilities and an optional coherent rotation.
    TwoQubit {
        cumulative: Vec<f64>,
        coherent: Option<Gate>,
    },
    OneQubit {
        cumulative: Vec<f64>,
    },
    Idle {
        qubit: usize,
        ns: f64,
    },
}

struct CompiledBlock {
    gates: Vec<Gate>,
    noise: Vec<GateNoise>,
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    probs
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

fn compile_block(block: &Circuit, model: &NoiseModel) -> Result<CompiledBlock> {
    let mut noise = Vec::with_capacity(block.len());
    for g in block.gates() {
        let n = match g {
            Gate::Delay { qubit, ns } => GateNoise::Idle {
                qubit: *qubit,
                ns: *ns,
            },
            g if g.is_two_qubit() => {
                let coherent = match model.coherent_error(g) {
                    Some((generator, delta)) => {
                        Some(rotation_gate(&generator, &g.qubits(), delta)?)
                    }
                    None => None,
                };
                match (model.pauli_error(g), coherent) {
                    (None, None) => GateNoise::None,
                    (probs, coherent) => GateNoise::TwoQubit {
                        cumulative: probs.map(|p| cumulative(&p)).unwrap_or_default(),
                        coherent,
                    },
                }
            }
            g => match model.pauli_error(g) {
                Some(p) => GateNoise::OneQubit {
                    cumulative: cumulative(&p),
                },
                None => GateNoise::None,
            },
        };
        noise.push(n);
    }
    Ok(CompiledBlock {
        gates: block.gates().to_vec(),
        noise,
    })
}

fn sample_index<R: Rng>(cumulative: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cumulative
        .iter()
        .position(|&c| u < c)
        .unwrap_or(cumulative.len() - 1)
}

fn apply_pauli_index(state: &mut Statevector, index: usize, qubits: &[usize]) {
    let s = PauliString::from_index(index, qubits.len());
    for (&q, &p) in qubits.iter().zip(s.letters()) {
        if p != Pauli::I {
            state.apply_pauli(q, p);
        }
    }
}

struct Trajectory<'a> {
    model: &'a NoiseModel,
    detuning: Vec<f64>,
}

impl Trajectory<'_> {
    fn run_block<R: Rng>(
        &self,
        state: &mut Statevector,
        block: &CompiledBlock,
        rng: &mut R,
    ) -> Result<()> {
        let dephasing = self.model.spec().idle.dephasing_rate;
        for (g, noise) in block.gates.iter().zip(&block.noise) {
            state.apply(g)?;
            match noise {
                GateNoise::None => {}
                GateNoise::TwoQubit {
                    cumulative,
                    coherent,
                } => {
                    if let Some(rot) = coherent {
                        state.apply(rot)?;
                    }
                    if !cumulative.is_empty() {
                        let k = sample_index(cumulative, rng);
                        if k != 0 {
                            apply_pauli_index(state, k, &g.qubits());
                        }
                    }
                }
                GateNoise::OneQubit { cumulative } => {
                    let k = sample_index(cumulative, rng);
                    if k != 0 {
                        apply_pauli_index(state, k, &g.qubits());
                    }
                }
                GateNoise::Idle { qubit, ns } => {
                    let phase = self.detuning[*qubit] * ns;
                    if phase != 0.0 {
                        state.apply(&Gate::Rz {
                            qubit: *qubit,
                            theta: phase,
                        })?;
                    }
                    if dephasing > 0.0 {
                        let p = 0.5 * (1.0 - (-dephasing * ns).exp());
                        if rng.random::<f64>() < p {
                            state.apply_pauli(*qubit, Pauli::Z);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Per-block outcome accumulators of one trajectory group.
enum Accum {
    Exact(Vec<f64>),
    Sampled(Counts),
}

/// Runs `blocks` back to back from `initial`, measuring (without readout
/// error) after each block. Finite shots are split evenly across
/// trajectories; infinite shots average the exact trajectory distributions.
pub fn run_trajectories(
    initial: &Statevector,
    blocks: &[Circuit],
    model: &NoiseModel,
    opts: &TrajectoryOptions,
) -> Result<Vec<Counts>> {
    let basis = [Circuit::new(initial.width())];
    Ok(
        run_trajectories_in_bases(initial, blocks, &basis, model, opts)?
            .into_iter()
            .map(|mut per_basis| per_basis.pop().expect("one basis"))
            .collect(),
    )
}

/// Like [`run_trajectories`], but every snapshot is measured once per basis
/// change circuit in `bases`; the result is indexed `[block][basis]`. Basis
/// circuits run with the model's gate noise and do not feed back into the
/// evolution.
pub fn run_trajectories_in_bases(
    initial: &Statevector,
    blocks: &[Circuit],
    bases: &[Circuit],
    model: &NoiseModel,
    opts: &TrajectoryOptions,
) -> Result<Vec<Vec<Counts>>> {
    let width = initial.width();
    if let Some(b) = blocks.iter().chain(bases).find(|b| b.width() != width) {
        return Err(Error::WidthMismatch {
            expected: width,
            found: b.width(),
        });
    }
    if bases.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one measurement basis required".into(),
        ));
    }
    let total_shots = opts.shots.count();
    if total_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let trajectories = if model.is_deterministic() {
        1
    } else {
        opts.trajectories.max(1)
    };
    let compiled: Vec<CompiledBlock> = blocks
        .iter()
        .map(|b| compile_block(b, model))
        .collect::<Result<_>>()?;
    let compiled_bases: Vec<CompiledBlock> = bases
        .iter()
        .map(|b| compile_block(b, model))
        .collect::<Result<_>>()?;
    let detuning_std = model.spec().idle.detuning_std;
    let normal = Normal::new(0.0, detuning_std.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let run_one = |t: usize| -> Result<Vec<Accum>> {
        let mut rng = seed::rng(opts.seed, &[t as u64]);
        let detuning = (0..width)
            .map(|_| {
                if detuning_std > 0.0 {
                    normal.sample(&mut rng)
                } else {
                    0.0
                }
            })
            .collect();
        let traj = Trajectory { model, detuning };
        let shots_here = total_shots / trajectories as u64
            + u64::from((t as u64) < total_shots % trajectories as u64);
        let mut state = initial.clone();
        let mut out = Vec::with_capacity(compiled.len() * compiled_bases.len());
        for (b, block) in compiled.iter().enumerate() {
            traj.run_block(&mut state, block, &mut rng)?;
            for (k, basis) in compiled_bases.iter().enumerate() {
                let probs = if basis.gates.is_empty() {
                    state.probabilities()
                } else {
                    let mut rotated = state.clone();
                    traj.run_block(&mut rotated, basis, &mut rng)?;
                    rotated.probabilities()
                };
                out.push(if opts.shots.is_infinite() {
                    Accum::Exact(probs)
                } else if shots_here == 0 {
                    Accum::Sampled(Counts::new(width, 0))
                } else {
                    let mut shot_rng =
                        seed::rng(opts.seed, &[t as u64, SHOT_TAG, b as u64, k as u64]);
                    Accum::Sampled(sample_probabilities(
                        width,
                        &probs,
                        Shots::Finite(shots_here),
                        &mut shot_rng,
                    )?)
                });
            }
        }
        Ok(out)
    };

    let merge = |acc: &mut Vec<Accum>, next: Vec<Accum>| {
        for (a, n) in acc.iter_mut().zip(next) {
            match (a, n) {
                (Accum::Exact(x), Accum::Exact(y)) => {
                    x.iter_mut().zip(y).for_each(|(p, q)| *p += q)
                }
                (Accum::Sampled(x), Accum::Sampled(y)) => y.iter().for_each(|(i, w)| x.add(i, w)),
                _ => unreachable!("accumulator kinds agree"),
            }
        }
    };

    let groups: Vec<Vec<Accum>> = (0..trajectories.div_ceil(GROUP))
        .into_par_iter()
        .map(|g| {
            let mut acc: Option<Vec<Accum>> = None;
            for t in g * GROUP..((g + 1) * GROUP).min(trajectories) {
                let r = run_one(t)?;
                match acc.as_mut() {
                    None => acc = Some(r),
                    Some(a) => merge(a, r),
                }
            }
            Ok(acc.expect("non-empty group"))
        })
        .collect::<Result<_>>()?;
    let mut iter = groups.into_iter();
    let mut total = iter.next().expect("at least one trajectory");
    for g in iter {
        merge(&mut total, g);
    }

    let flat: Vec<Counts> = total
        .into_iter()
        .map(|a| match a {
            Accum::Exact(sum) => {
                let probs: Vec<f64> = sum.iter().map(|p| p / trajectories as f64).collect();
                Counts::from_probabilities(width, &probs, total_shots)
            }
            Accum::Sampled(mut c) => {
                c.set_total_shots(total_shots);
                c
            }
        })
        .collect();
    let mut flat = flat.into_iter();
    Ok((0..blocks.len())
        .map(|_| flat.by_ref().take(bases.len()).collect())
        .collect())
}

/// Exact mixed-state evolution of `blocks` from `initial`, returning the state
/// after each block. `detuning` fixes the quasi-static detuning per qubit
/// (rad/ns); pass zeros to disable it.
pub fn run_density(
    initial: &DensityOperator,
    blocks: &[Circuit],
    model: &NoiseModel,
    detuning: &[f64],
) -> Result<Vec<DensityOperator>> {
    let n = initial.num_qubits();
    if detuning.len() != n {
        return Err(Error::WidthMismatch {
            expected: n,
            found: detuning.len(),
        });
    }
    let dephasing = model.spec().idle.dephasing_rate;
    let mut rho = initial.clone();
    let mut out = Vec::with_capacity(blocks.len());
    for block in blocks {
        if block.width() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: block.width(),
            });
        }
        for g in block.gates() {
            g.validate(n)?;
            match g {
                Gate::Delay { qubit, ns } => {
                    let rz = Gate::Rz {
                        qubit: 0,
                        theta: detuning[*qubit] * ns,
                    };
                    rho.apply_unitary(&rz.local_matrix(), &[*qubit]);
                    if dephasing > 0.0 {
                        let p = 0.5 * (1.0 - (-dephasing * ns).exp());
                        rho.apply_channel(&KrausChannel::dephasing(p)?, &[*qubit])?;
                    }
                }
                g if g.is_two_qubit() => {
                    rho.apply_channel(&noisy_gate_channel(g, model)?, &g.qubits())?
                }
                g => {
                    rho.apply_unitary(&g.local_matrix(), &g.qubits());
                    if let Some(p) = model.pauli_error(g) {
                        rho.apply_channel(&KrausChannel::pauli(1, &p)?, &g.qubits())?;
                    }
                }
            }
        }
        out.push(rho.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_trotter_step, NeelVariant};
    use crate::model::{neel_prep, BondSchedule, ModelParams, RzzImpl, TrotterOptions};
    use crate::noise::NoiseSpec;
    use crate::qsim::{run_circuit, PauliString};

    fn blocks(l: usize, steps: usize, imp: RzzImpl) -> Vec<Circuit> {
        let p = ModelParams::scar(l);
        let step = build_trotter_step(
            &p,
            TrotterOptions {
                rzz_impl: imp,
                schedule: BondSchedule::EvenOdd,
            },
        )
        .unwrap();
        let mut first = neel_prep(l, NeelVariant::Z2);
        first.append(&step).unwrap();
        std::iter::once(first)
            .chain(std::iter::repeat_n(step, steps - 1))
            .collect()
    }

    #[test]
    fn noiseless_matches_statevector() {
        let model = NoiseSpec::noiseless().compile().unwrap();
        let b = blocks(4, 3, RzzImpl::TwoCnot);
        let opts = TrajectoryOptions {
            trajectories: 16,
            shots: Shots::Infinite(1000),
            seed: 1,
        };
        let counts = run_trajectories(&Statevector::zero(4), &b, &model, &opts).unwrap();
        let mut s = Statevector::zero(4);
        for (blk, c) in b.iter().zip(&counts) {
            s = run_circuit(&s, blk).unwrap();
            for (i, p) in s.probabilities().iter().enumerate() {
                assert!((c.get(i) / 1000.0 - p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn trajectories_agree_with_density_matrix() {
        let spec = NoiseSpec::depolarizing(0.08);
        let model = spec.compile().unwrap();
        let b = blocks(3, 2, RzzImpl::Native);
        let n_traj = 100_000;
        let opts = TrajectoryOptions {
            trajectories: n_traj,
            shots: Shots::Infinite(1),
            seed: 5,
        };
        let counts = run_trajectories(&Statevector::zero(3), &b, &model, &opts).unwrap();
        let rho = run_density(
            &DensityOperator::pure(&Statevector::zero(3)).unwrap(),
            &b,
            &model,
            &[0.0; 3],
        )
        .unwrap();
        for (c, r) in counts.iter().zip(&rho) {
            for label in ["ZZI", "IZZ", "ZIZ", "ZII"] {
                let p: PauliString = label.parse().unwrap();
                let exact = r.expectation(&p.matrix()).re;
                let zmask: Vec<usize> = p
                    .letters()
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| **l == Pauli::Z)
                    .map(|(q, _)| q)
                    .collect();
                let est = c
                    .mean_of(|i| {
                        let parity: u32 = zmask.iter().map(|&q| ((i >> (2 - q)) & 1) as u32).sum();
                        if parity.is_multiple_of(2) {
                            1.0
                        } else {
                            -1.0
                        }
                    })
                    .unwrap();
                // Each trajectory contributes a value in [-1, 1].
                let sigma = (1.0 / n_traj as f64).sqrt();
                assert!(
                    (est - exact).abs() < 5.0 * sigma,
                    "{label}: {est} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let model = NoiseSpec::casablanca_like().compile().unwrap();
        let b = blocks(4, 2, RzzImpl::ScaledRzx);
        let opts = TrajectoryOptions {
            trajectories: 20,
            shots: Shots::Finite(999),
            seed: 77,
        };
        let a = run_trajectories(&Statevector::zero(4), &b, &model, &opts).unwrap();
        let c = run_trajectories(&Statevector::zero(4), &b, &model, &opts).unwrap();
        assert_eq!(a, c);
        assert_eq!(a[1].total(), 999.0);
    }

    #[test]
    fn static_detuning_rotates_idle_qubit() {
        let spec = NoiseSpec {
            idle: crate::noise::IdleNoise {
                detuning_std: 0.0,
                dephasing_rate: 0.0,
            },
            ..NoiseSpec::noiseless()
        };
        let model = spec.compile().unwrap();
        let c = Circuit::from_gates(
            1,
            [
                Gate::H(0),
                Gate::Delay {
                    qubit: 0,
                    ns: 100.0,
                },
                Gate::H(0),
            ],
        )
        .unwrap();
        let rho0 = DensityOperator::pure(&Statevector::zero(1)).unwrap();
        let out = run_density(&rho0, &[c], &model, &[0.01]).unwrap();
        // H Rz(1.0) H|0>: P(0) = cos²(0.5).
        assert!((out[0].diagonal()[0] - 0.5f64.cos().powi(2)).abs() < 1e-12);
    }
}
