use num_complex::Complex64;

use super::circuit::Circuit;
use super::dense::{CMatrix, I, ONE, ZERO};
use super::gate::Gate;
use super::pauli::{Pauli, PauliString};
use super::{bit_mask, MAX_WIDTH};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0...0>`.
    pub fn zero(width: usize) -> Self {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Self {
        assert!(width <= MAX_WIDTH, "width {width} exceeds {MAX_WIDTH}");
        let mut amps = vec![ZERO; 1 << width];
        amps[index] = ONE;
        Self { width, amps }
    }

    /// Basis state from a string of `0`/`1`, character `k` = qubit `k`.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let index = parse_bitstring(bits)?;
        Ok(Self::basis(bits.len(), index))
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let width = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << width || width > MAX_WIDTH {
            return Err(Error::InvalidState(format!(
                "{} amplitudes is not a supported power of two",
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm}")));
        }
        Ok(Self { width, amps })
    }

    /// Builds from amplitudes that the caller guarantees are normalized up to
    /// rounding, rescaling to unit norm.
    pub(crate) fn from_unnormalized(width: usize, mut amps: Vec<Complex64>) -> Self {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Self { width, amps }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn fidelity(&self, other: &Statevector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Statevector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.width)?;
        let n = self.width;
        match *gate {
            Gate::Rz { qubit, theta } => {
                let m = Complex64::from_polar(1.0, -theta / 2.0);
                self.diag1(qubit, m, m.conj());
            }
            Gate::Z(q) => self.diag1(q, ONE, -ONE),
            Gate::S(q) => self.diag1(q, ONE, I),
            Gate::Sdg(q) => self.diag1(q, ONE, -I),
            Gate::X(q) => self.apply_pauli(q, Pauli::X),
            Gate::Y(q) => self.apply_pauli(q, Pauli::Y),
            Gate::Delay { .. } => {}
            Gate::Rzz { a, b, theta } => {
                let (ma, mb) = (bit_mask(n, a), bit_mask(n, b));
                let same = Complex64::from_polar(1.0, -theta / 2.0);
                let diff = same.conj();
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    *amp *= if ((i & ma) == 0) == ((i & mb) == 0) {
                        same
                    } else {
                        diff
                    };
                }
            }
            Gate::Cnot { control, target } => {
                let (mc, mt) = (bit_mask(n, control), bit_mask(n, target));
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::H(qubit) => {
                self.dense1(qubit, &gate.local_matrix())
            }
            Gate::Rzx {
                control, target, ..
            } => self.dense2(control, target, &gate.local_matrix()),
            Gate::Unitary {
                ref qubits,
                ref matrix,
            } => match qubits.len() {
                1 => self.dense1(qubits[0], matrix),
                2 => self.dense2(qubits[0], qubits[1], matrix),
                _ => self.dense_k(qubits, matrix),
            },
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: circuit.width(),
            });
        }
        circuit.gates().iter().try_for_each(|g| self.apply(g))
    }

    /// Applies a single-qubit Pauli without validation overhead.
    pub fn apply_pauli(&mut self, qubit: usize, p: Pauli) {
        let m = bit_mask(self.width, qubit);
        match p {
            Pauli::I => {}
            Pauli::Z => self.diag1(qubit, ONE, -ONE),
            Pauli::X | Pauli::Y => {
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let j = i | m;
                        let (a0, a1) = (self.amps[i], self.amps[j]);
                        if p == Pauli::X {
                            self.amps[i] = a1;
                            self.amps[j] = a0;
                        } else {
                            self.amps[i] = -I * a1;
                            self.amps[j] = I * a0;
                        }
                    }
                }
            }
        }
    }

    /// `⟨ψ|P|ψ⟩` including the string's sign.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: p.width(),
            });
        }
        let (mut xmask, mut zmask, mut ny) = (0usize, 0usize, 0u32);
        for (q, letter) in p.letters().iter().enumerate() {
            let m = bit_mask(self.width, q);
            match letter {
                Pauli::I => {}
                Pauli::X => xmask |= m,
                Pauli::Z => zmask |= m,
                Pauli::Y => {
                    xmask |= m;
                    zmask |= m;
                    ny += 1;
                }
            }
        }
        let phase = I.powu(ny);
        let total: Complex64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let sign = if (i & zmask).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                self.amps[i ^ xmask].conj() * a * sign
            })
            .sum();
        Ok(p.sign() * (phase * total).re)
    }

    /// `⟨Z_q⟩` for every qubit.
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.width];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for (q, z) in out.iter_mut().enumerate() {
                if i & bit_mask(self.width, q) == 0 {
                    *z += p;
                } else {
                    *z -= p;
                }
            }
        }
        out
    }

    fn diag1(&mut self, qubit: usize, d0: Complex64, d1: Complex64) {
        let m = bit_mask(self.width, qubit);
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & m == 0 { d0 } else { d1 };
        }
    }

    fn dense1(&mut self, qubit: usize, u: &CMatrix) {
        let m = bit_mask(self.width, qubit);
        let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = u00 * a0 + u01 * a1;
                self.amps[i | m] = u10 * a0 + u11 * a1;
            }
        }
    }

    fn dense2(&mut self, q0: usize, q1: usize, u: &CMatrix) {
        let (m0, m1) = (bit_mask(self.width, q0), bit_mask(self.width, q1));
        let idx = [0, m1, m0, m0 | m1];
        for base in 0..self.amps.len() {
            if base & (m0 | m1) != 0 {
                continue;
            }
            let v = idx.map(|o| self.amps[base | o]);
            for (r, &o) in idx.iter().enumerate() {
                self.amps[base | o] = (0..4).map(|c| u[(r, c)] * v[c]).sum();
            }
        }
    }

    fn dense_k(&mut self, qubits: &[usize], u: &CMatrix) {
        let k = qubits.len();
        let masks: Vec<usize> = qubits.iter().map(|&q| bit_mask(self.width, q)).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|loc| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| loc >> (k - 1 - j) & 1 == 1)
                    .map(|(_, m)| m)
                    .sum()
            })
            .collect();
        let mut v = vec![ZERO; 1 << k];
        for base in 0..self.amps.len() {
            if base & all != 0 {
                continue;
            }
            for (slot, &o) in v.iter_mut().zip(&offsets) {
                *slot = self.amps[base | o];
            }
            for (r, &o) in offsets.iter().enumerate() {
                self.amps[base | o] = (0..v.len()).map(|c| u[(r, c)] * v[c]).sum();
            }
        }
    }
}

pub(crate) fn parse_bitstring(bits: &str) -> Result<usize> {
    if bits.len() > MAX_WIDTH {
        return Err(Error::TooLarge {
            what: "bitstring",
            size: bits.len(),
            max: MAX_WIDTH,
        });
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(Error::InvalidState(format!("bad bit `{other}`"))),
    })
}

pub(crate) fn format_bitstring(index: usize, width: usize) -> String {
    (0..width)
        .map(|q| {
            if index & bit_mask(width, q) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn apply_gate(mut state: Statevector, gate: &Gate) -> Result<Statevector> {
    state.apply(gate)?;
    Ok(state)
}

pub fn run_circuit(initial: &Statevector, circuit: &Circuit) -> Result<Statevector> {
    let mut s = initial.clone();
    s.run(circuit)?;
    Ok(s)
}

pub fn expectation_pauli(state: &Statevector, p: &PauliString) -> Result<f64> {
    state.expectation(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::dense;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn assert_amps(s: &Statevector, expected: &[Complex64]) {
        for (a, b) in s.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(Statevector::zero(1), &Gate::H(0)).unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert_amps(&s, &[h, h]);
    }

    #[test]
    fn rzz_phase_on_00() {
        let s = apply_gate(
            Statevector::zero(2),
            &Gate::Rzz {
                a: 0,
                b: 1,
                theta: 2.0,
            },
        )
        .unwrap();
        assert_amps(&s, &[Complex64::from_polar(1.0, -1.0), ZERO, ZERO, ZERO]);
    }

    #[test]
    fn cnot_truth_table() {
        let s = Statevector::from_bitstring("10").unwrap();
        let s = apply_gate(
            s,
            &Gate::Cnot {
                control: 0,
                target: 1,
            },
        )
        .unwrap();
        assert_eq!(s, Statevector::from_bitstring("11").unwrap());
    }

    #[test]
    fn circuit_examples() {
        let zero = Statevector::zero(5);
        assert_eq!(run_circuit(&zero, &Circuit::new(5)).unwrap(), zero);
        let flips = Circuit::from_gates(5, (0..5).chain(0..5).map(Gate::X)).unwrap();
        assert_eq!(run_circuit(&zero, &flips).unwrap(), zero);
        let prep = Circuit::from_gates(5, [Gate::X(1), Gate::X(3)]).unwrap();
        assert_eq!(
            run_circuit(&zero, &prep).unwrap(),
            Statevector::from_bitstring("01010").unwrap()
        );
    }

    #[test]
    fn pauli_expectations() {
        let z: PauliString = "Z".parse().unwrap();
        assert_eq!(Statevector::zero(1).expectation(&z).unwrap(), 1.0);
        let plus = apply_gate(Statevector::zero(1), &Gate::H(0)).unwrap();
        let x: PauliString = "X".parse().unwrap();
        assert!((plus.expectation(&x).unwrap() - 1.0).abs() < 1e-12);
        let s = Statevector::from_bitstring("01").unwrap();
        assert_eq!(s.expectation(&"ZZ".parse().unwrap()).unwrap(), -1.0);
        let plus_y = apply_gate(plus, &Gate::S(0)).unwrap();
        assert!((plus_y.expectation(&"Y".parse().unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            plus_y.expectation(&"YY".parse().unwrap()),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn kernels_match_embedded_matrices() {
        let gates = [
            Gate::Rx {
                qubit: 1,
                theta: 0.3,
            },
            Gate::Ry {
                qubit: 2,
                theta: -0.8,
            },
            Gate::Rz {
                qubit: 0,
                theta: 1.1,
            },
            Gate::Rzz {
                a: 2,
                b: 0,
                theta: 0.6,
            },
            Gate::Rzx {
                control: 2,
                target: 1,
                theta: 0.9,
            },
            Gate::Cnot {
                control: 1,
                target: 0,
            },
            Gate::H(2),
            Gate::S(1),
            Gate::Sdg(0),
            Gate::X(2),
            Gate::Y(1),
            Gate::Z(0),
        ];
        let mut s = Statevector::zero(3);
        s.apply(&Gate::H(0)).unwrap();
        s.apply(&Gate::Ry {
            qubit: 1,
            theta: 0.4,
        })
        .unwrap();
        for g in &gates {
            let u = dense::embed(&g.local_matrix(), &g.qubits(), 3);
            let v = nalgebra::DVector::from_column_slice(s.amplitudes());
            let expected = &u * v;
            s.apply(g).unwrap();
            assert_amps(&s, expected.as_slice());
        }
        let u3 = dense::kron(
            &Gate::H(0).local_matrix(),
            &Gate::Cnot {
                control: 0,
                target: 1,
            }
            .local_matrix(),
        );
        let g = Gate::unitary(vec![1, 2, 0], u3.clone()).unwrap();
        let expected =
            dense::embed(&u3, &[1, 2, 0], 3) * nalgebra::DVector::from_column_slice(s.amplitudes());
        s.apply(&g).unwrap();
        assert_amps(&s, expected.as_slice());
    }

    #[test]
    fn bitstring_round_trip() {
        let idx = parse_bitstring("0110").unwrap();
        assert_eq!(idx, 6);
        assert_eq!(format_bitstring(idx, 4), "0110");
    }
}
