//! Pauli twirling of two-qubit gates.
//!
//! Each two-qubit gate `G` is replaced by `post · G' · pre` with random Pauli
//! pairs chosen so the ideal unitary is unchanged. For CNOT the post pair is
//! the conjugate of the pre pair. For `R_ZZ(θ)` and `R_ZX(θ)` pre and post
//! pairs coincide and `θ → −θ` whenever the pair anticommutes with the
//! generator, which makes the averaged noise a stochastic Pauli channel even
//! though the gate is not Clifford.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::noise::{error_channel, NoiseModel};
use crate::qsim::{Circuit, Gate, GateKind, KrausChannel, Pauli, PauliString};
use crate::{seed, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwirlAssignment {
    /// Pauli indices before the gate on (first, second) qubit.
    pub pre: (usize, usize),
    pub post: (usize, usize),
    /// `-1` when the rotation angle is flipped.
    pub angle_sign: i8,
}

/// Post-Pauli indices `(γ, δ)` restoring CNOT after pre-Paulis `(α, β)` on
/// (control, target).
pub fn twirl_cnot(alpha: usize, beta: usize) -> Result<(usize, usize)> {
    for x in [alpha, beta] {
        if x > 3 {
            return Err(Error::InvalidPauliIndex(x));
        }
    }
    let (a, b) = (alpha as f64, beta as f64);
    let gamma = a + b * (b - 1.0) * (3.5 - b) * (1.0 - 2.0 * a / 3.0);
    let delta = b + a * (a - 3.0) * ((beta % 2) as f64 - 0.5);
    Ok((gamma.round() as usize, delta.round() as usize))
}

/// Twirl of a rotation with two-qubit generator `generator`.
pub fn twirl_rotation(
    alpha: usize,
    beta: usize,
    generator: &PauliString,
) -> Result<TwirlAssignment> {
    let pair = PauliString::new(vec![Pauli::from_index(alpha)?, Pauli::from_index(beta)?]);
    Ok(TwirlAssignment {
        pre: (alpha, beta),
        post: (alpha, beta),
        angle_sign: if pair.commutes_with(generator) { 1 } else { -1 },
    })
}

/// `R_ZZ` twirl; the angle itself does not affect the assignment.
pub fn twirl_rzz(alpha: usize, beta: usize, _theta: f64) -> Result<TwirlAssignment> {
    twirl_rotation(alpha, beta, &"ZZ".parse().expect("valid"))
}

/// Assignment for any supported two-qubit gate, `None` for gates that are not
/// twirled (custom unitaries).
pub fn assignment_for(gate: &Gate, alpha: usize, beta: usize) -> Result<Option<TwirlAssignment>> {
    match gate.kind() {
        GateKind::Cnot => {
            let post = twirl_cnot(alpha, beta)?;
            Ok(Some(TwirlAssignment {
                pre: (alpha, beta),
                post,
                angle_sign: 1,
            }))
        }
        GateKind::Rzz | GateKind::Rzx => {
            twirl_rotation(alpha, beta, &gate.generator().expect("rotation")).map(Some)
        }
        _ => Ok(None),
    }
}

/// Dressed gate sequence for one assignment.
pub fn dress(gate: &Gate, t: &TwirlAssignment) -> Result<Vec<Gate>> {
    let qubits = gate.qubits();
    let pauli_gates = |(x, y): (usize, usize)| -> Result<Vec<Gate>> {
        Ok([(qubits[0], x), (qubits[1], y)]
            .into_iter()
            .map(|(q, k)| Pauli::from_index(k).map(|p| Gate::pauli(q, p)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect())
    };
    let core = match gate.angle() {
        Some(theta) if t.angle_sign < 0 => gate.with_angle(-theta),
        _ => gate.clone(),
    };
    let mut out = pauli_gates(t.pre)?;
    out.push(core);
    out.extend(pauli_gates(t.post)?);
    Ok(out)
}

/// Twirls every CNOT, `R_ZZ` and `R_ZX` with independent uniform Pauli pairs.
pub fn twirl_circuit_with<R: Rng>(circuit: &Circuit, rng: &mut R) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.width());
    for g in circuit.gates() {
        if !g.is_two_qubit() {
            out.push(g.clone())?;
            continue;
        }
        let (alpha, beta) = (rng.random_range(0..4), rng.random_range(0..4));
        match assignment_for(g, alpha, beta)? {
            Some(t) => {
                for d in dress(g, &t)? {
                    out.push(d)?;
                }
            }
            None => {
                out.push(g.clone())?;
            }
        }
    }
    Ok(out)
}

pub fn twirl_circuit(circuit: &Circuit, seed_value: u64) -> Result<Circuit> {
    twirl_circuit_with(circuit, &mut seed::rng(seed_value, &[]))
}

/// Error channel of the noisy gate averaged over all 16 twirl assignments,
/// i.e. `(1/16) Σ_t post_t ∘ N ∘ G_t ∘ pre_t` with the ideal gate removed.
pub fn twirled_error_channel(gate: &Gate, model: &NoiseModel) -> Result<KrausChannel> {
    let local = match gate {
        Gate::Cnot { .. } => Gate::Cnot {
            control: 0,
            target: 1,
        },
        Gate::Rzz { theta, .. } => Gate::Rzz {
            a: 0,
            b: 1,
            theta: *theta,
        },
        Gate::Rzx { theta, .. } => Gate::Rzx {
            control: 0,
            target: 1,
            theta: *theta,
        },
        other => return Err(Error::InvalidParameter(format!("cannot twirl {other:?}"))),
    };
    let ideal_inverse = local.inverse().local_matrix();
    let weight = Complex64::new(0.25, 0.0);
    let mut ops = Vec::new();
    for alpha in 0..4 {
        for beta in 0..4 {
            let t = assignment_for(&local, alpha, beta)?.expect("supported gate");
            let dressed = dress(&local, &t)?;
            // Noise acts right after the core gate.
            let mut before = crate::qsim::dense::identity(4);
            let mut after = crate::qsim::dense::identity(4);
            let mut seen_core = false;
            for g in &dressed {
                let m = crate::qsim::dense::embed(&g.local_matrix(), &g.qubits(), 2);
                if g.is_two_qubit() {
                    before = m * before;
                    seen_core = true;
                } else if seen_core {
                    after = m * after;
                } else {
                    before = m * before;
                }
            }
            let core = dressed
                .iter()
                .find(|g| g.is_two_qubit())
                .expect("core gate");
            for e in error_channel(core, model)?.kraus_ops() {
                ops.push(&ideal_inverse * &after * e * &before * weight);
            }
        }
    }
    KrausChannel::new(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::dense::{self, CMatrix};
    use crate::qsim::{max_off_diagonal, pauli_transfer_matrix};

    fn pair_matrix(a: usize, b: usize) -> CMatrix {
        PauliString::new(vec![Pauli::ALL[a], Pauli::ALL[b]]).matrix()
    }

    #[test]
    fn cnot_formula_matches_conjugation_for_all_pairs() {
        let cnot = Gate::Cnot {
            control: 0,
            target: 1,
        }
        .local_matrix();
        for alpha in 0..4 {
            for beta in 0..4 {
                let (g, d) = twirl_cnot(alpha, beta).unwrap();
                assert!(g < 4 && d < 4);
                let conj = &cnot * pair_matrix(alpha, beta) * &cnot;
                assert!(
                    dense::phase_insensitive_diff(&conj, &pair_matrix(g, d)) < 1e-12,
                    "({alpha},{beta}) -> ({g},{d})"
                );
            }
        }
        assert_eq!(twirl_cnot(0, 0).unwrap(), (0, 0));
        assert_eq!(twirl_cnot(1, 0).unwrap(), (1, 1));
        assert!(twirl_cnot(4, 0).is_err());
    }

    #[test]
    fn rzz_sign_rule() {
        assert_eq!(twirl_rzz(0, 0, 2.0).unwrap().angle_sign, 1);
        assert_eq!(twirl_rzz(1, 0, 2.0).unwrap().angle_sign, -1);
        assert_eq!(twirl_rzz(3, 3, 2.0).unwrap().angle_sign, 1);
        assert_eq!(twirl_rzz(1, 1, 2.0).unwrap().angle_sign, 1);
        assert_eq!(twirl_rzz(2, 3, 2.0).unwrap().angle_sign, -1);
    }

    #[test]
    fn every_assignment_preserves_the_gate() {
        for gate in [
            Gate::Cnot {
                control: 1,
                target: 0,
            },
            Gate::Rzz {
                a: 0,
                b: 1,
                theta: 1.3,
            },
            Gate::Rzx {
                control: 0,
                target: 1,
                theta: -0.7,
            },
        ] {
            let target = dense::embed(&gate.local_matrix(), &gate.qubits(), 2);
            for alpha in 0..4 {
                for beta in 0..4 {
                    let t = assignment_for(&gate, alpha, beta).unwrap().unwrap();
                    let u = dress(&gate, &t)
                        .unwrap()
                        .iter()
                        .fold(dense::identity(4), |acc, g| {
                            dense::embed(&g.local_matrix(), &g.qubits(), 2) * acc
                        });
                    assert!(
                        dense::phase_insensitive_diff(&u, &target) < 1e-12,
                        "{gate:?} {alpha}{beta}"
                    );
                }
            }
        }
    }

    #[test]
    fn twirl_is_seeded_and_skips_single_qubit_circuits() {
        let c = Circuit::from_gates(
            2,
            [
                Gate::H(0),
                Gate::Cnot {
                    control: 0,
                    target: 1,
                },
            ],
        )
        .unwrap();
        assert_eq!(twirl_circuit(&c, 3).unwrap(), twirl_circuit(&c, 3).unwrap());
        let single = Circuit::from_gates(2, [Gate::H(0), Gate::X(1)]).unwrap();
        assert_eq!(twirl_circuit(&single, 3).unwrap(), single);
    }

    #[test]
    fn twirl_makes_coherent_error_stochastic() {
        let spec = crate::noise::NoiseSpec {
            coherent_overrotation: 0.1,
            ..crate::noise::NoiseSpec::noiseless()
        };
        let model = spec.compile().unwrap();
        let gate = Gate::Rzz {
            a: 0,
            b: 1,
            theta: 2.0,
        };
        let raw = pauli_transfer_matrix(&error_channel(&gate, &model).unwrap()).unwrap();
        assert!(max_off_diagonal(&raw) > 1e-3);
        let twirled =
            pauli_transfer_matrix(&twirled_error_channel(&gate, &model).unwrap()).unwrap();
        assert!(max_off_diagonal(&twirled) < 1e-12);
    }
}
