//! Linear-inversion process tomography on the exact two-qubit mixed state.
//!
//! Preparations `{|0⟩, |1⟩, |+⟩, |+i⟩}` per qubit and measurement bases
//! `{X, Y, Z}` per qubit give 16 × 9 settings. Pauli expectations of each
//! output state are estimated from the counts, and the Pauli transfer matrix
//! follows as `R = E · S⁻¹` with `S` the known input Pauli vectors.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::noise::{
    apply_readout_error, run_density, ConfusionMatrix, ConfusionMethod, NoiseModel,
};
use crate::qsim::counts::sample_probabilities;
use crate::qsim::dense::{self, CMatrix};
use crate::qsim::{
    pauli_transfer_matrix, Circuit, Counts, DensityOperator, Gate, KrausChannel, Pauli,
    PauliString, Shots,
};
use crate::{seed, Error, Result};

/// Single-qubit preparations as gate lists from `|0⟩`.
pub const PREPARATIONS: [&str; 4] = ["0", "1", "+", "+i"];
pub const MEASUREMENT_BASES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn prep_gates(kind: usize, q: usize) -> Vec<Gate> {
    match kind {
        0 => vec![],
        1 => vec![Gate::X(q)],
        2 => vec![Gate::H(q)],
        _ => vec![Gate::H(q), Gate::S(q)],
    }
}

fn basis_gates(p: Pauli, q: usize) -> Vec<Gate> {
    match p {
        Pauli::X => vec![Gate::H(q)],
        Pauli::Y => vec![Gate::Sdg(q), Gate::H(q)],
        _ => vec![],
    }
}

/// Pauli vectors `(⟨I⟩, ⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of the single-qubit preparations, as
/// columns.
fn single_prep_matrix() -> Matrix4<f64> {
    Matrix4::new(
        1.0, 1.0, 1.0, 1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        1.0, -1.0, 0.0, 0.0,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QptResult {
    /// Reconstructed PTM, row-major 16 × 16 in base-4 Pauli order.
    pub ptm: Vec<Vec<f64>>,
    pub process_fidelity: f64,
    pub average_fidelity: f64,
    /// Condition number of the preparation matrix that is inverted.
    pub condition_number: f64,
    /// Smallest Choi eigenvalue; negative values mean the linear-inversion
    /// estimate is not completely positive.
    pub min_choi_eigenvalue: f64,
    pub completely_positive: bool,
    pub shots_per_setting: u64,
    pub infinite_shots: bool,
}

impl QptResult {
    pub fn ptm_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(16, 16, |r, c| self.ptm[r][c])
    }
}

/// Runs tomography of the two-qubit `circuit` under `model`, including the
/// model's readout error.
pub fn qpt_reconstruct(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: Shots,
    seed_value: u64,
) -> Result<QptResult> {
    if circuit.width() != 2 {
        return Err(Error::WidthMismatch {
            expected: 2,
            found: circuit.width(),
        });
    }
    if shots.count() == 0 {
        return Err(Error::ZeroShots);
    }
    let confusion = ConfusionMatrix::from_spec(model.spec(), 2, ConfusionMethod::Tensor)?;
    let zero = DensityOperator::pure(&crate::qsim::Statevector::zero(2))?;

    // Output Pauli vectors, one column per preparation pair.
    let mut measured = DMatrix::<f64>::zeros(16, 16);
    for prep in 0..16 {
        let (a, b) = (prep / 4, prep % 4);
        let mut c = Circuit::from_gates(2, prep_gates(a, 0).into_iter().chain(prep_gates(b, 1)))?;
        c.append(circuit)?;
        let out = run_density(&zero, std::slice::from_ref(&c), model, &[0.0, 0.0])?
            .pop()
            .expect("one block");

        let mut sums = [0.0f64; 16];
        let mut weights = [0.0f64; 16];
        for (m0, &p0) in MEASUREMENT_BASES.iter().enumerate() {
            for (m1, &p1) in MEASUREMENT_BASES.iter().enumerate() {
                let mut rho = out.clone();
                for g in basis_gates(p0, 0).into_iter().chain(basis_gates(p1, 1)) {
                    rho.apply_unitary(&g.local_matrix(), &g.qubits());
                }
                let probs: Vec<f64> = rho.diagonal().into_iter().map(|p| p.max(0.0)).collect();
                let ideal = if shots.is_infinite() {
                    Counts::from_probabilities(2, &probs, shots.count())
                } else {
                    let mut rng = seed::rng(seed_value, &[prep as u64, (3 * m0 + m1) as u64]);
                    sample_probabilities(2, &probs, shots, &mut rng)?
                };
                let noisy_seed = (!shots.is_infinite())
                    .then(|| seed::derive(seed_value, &[prep as u64, (3 * m0 + m1) as u64, 1]));
                let counts = apply_readout_error(&ideal, &confusion, noisy_seed)?;
                let total = counts.total();
                // Each setting contributes to ⟨P0 P1⟩, ⟨P0 I⟩, ⟨I P1⟩.
                let (i0, i1) = (p0.index(), p1.index());
                for (idx, use0, use1) in [
                    (4 * i0 + i1, true, true),
                    (4 * i0, true, false),
                    (i1, false, true),
                ] {
                    let v: f64 = counts
                        .iter()
                        .map(|(bits, w)| {
                            let b0 = use0 && bits & 0b10 != 0;
                            let b1 = use1 && bits & 0b01 != 0;
                            if b0 ^ b1 {
                                -w
                            } else {
                                w
                            }
                        })
                        .sum::<f64>()
                        / total;
                    sums[idx] += v;
                    weights[idx] += 1.0;
                }
            }
        }
        measured[(0, prep)] = 1.0;
        for idx in 1..16 {
            measured[(idx, prep)] = sums[idx] / weights[idx];
        }
    }

    let s1 = single_prep_matrix();
    let s1_inv = s1.try_inverse().expect("preparation basis is complete");
    let s_inv = kron4(&s1_inv, &s1_inv);
    let ptm = &measured * s_inv;
    let svd = kron4(&s1, &s1).svd(false, false);
    let condition_number = svd.singular_values.max() / svd.singular_values.min();

    let ideal = pauli_transfer_matrix(&KrausChannel::unitary(circuit.unitary()?)?)?;
    let process_fidelity = (ideal.transpose() * &ptm).trace() / 16.0;
    let min_choi_eigenvalue = min_choi_eigenvalue(&ptm);
    Ok(QptResult {
        ptm: (0..16)
            .map(|r| (0..16).map(|c| ptm[(r, c)]).collect())
            .collect(),
        process_fidelity,
        average_fidelity: (4.0 * process_fidelity + 1.0) / 5.0,
        condition_number,
        min_choi_eigenvalue,
        completely_positive: min_choi_eigenvalue > -1e-9,
        shots_per_setting: shots.count(),
        infinite_shots: shots.is_infinite(),
    })
}

pub fn qpt_reconstruct_gate(
    gate: &Gate,
    model: &NoiseModel,
    shots: Shots,
    seed_value: u64,
) -> Result<QptResult> {
    qpt_reconstruct(
        &Circuit::from_gates(2, [gate.clone()])?,
        model,
        shots,
        seed_value,
    )
}

fn kron4(a: &Matrix4<f64>, b: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(16, 16, |r, c| a[(r / 4, c / 4)] * b[(r % 4, c % 4)])
}

/// Smallest eigenvalue of `Σ R_ij P_jᵀ ⊗ P_i / 4`, a unit-trace Choi matrix.
fn min_choi_eigenvalue(ptm: &DMatrix<f64>) -> f64 {
    let paulis: Vec<CMatrix> = PauliString::all(2).map(|p| p.matrix()).collect();
    let mut choi = CMatrix::zeros(16, 16);
    for i in 0..16 {
        for j in 0..16 {
            if ptm[(i, j)] != 0.0 {
                choi += dense::kron(&paulis[j].transpose(), &paulis[i])
                    * Complex64::new(ptm[(i, j)] / 16.0, 0.0);
            }
        }
    }
    choi.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}
