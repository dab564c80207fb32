use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;

use super::dense::{self, CMatrix, I, ONE, ZERO};
use super::pauli::{Pauli, PauliString};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    Rzz,
    Rzx,
    Cnot,
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    Unitary,
    Delay,
}

/// A gate on explicit qubit indices. Rotations are `exp(-iθP/2)`.
///
/// `Delay` is an idle period in nanoseconds; it is the identity for
/// noiseless execution and the hook for idle dephasing and decoupling.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Rx {
        qubit: usize,
        theta: f64,
    },
    Ry {
        qubit: usize,
        theta: f64,
    },
    Rz {
        qubit: usize,
        theta: f64,
    },
    /// `exp(-iθ Z_a Z_b / 2)`.
    Rzz {
        a: usize,
        b: usize,
        theta: f64,
    },
    /// `exp(-iθ Z_control X_target / 2)`, the cross-resonance rotation.
    Rzx {
        control: usize,
        target: usize,
        theta: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Unitary {
        qubits: Vec<usize>,
        matrix: Arc<CMatrix>,
    },
    Delay {
        qubit: usize,
        ns: f64,
    },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Rx { .. } => GateKind::Rx,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::Rzz { .. } => GateKind::Rzz,
            Gate::Rzx { .. } => GateKind::Rzx,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::H(_) => GateKind::H,
            Gate::S(_) => GateKind::S,
            Gate::Sdg(_) => GateKind::Sdg,
            Gate::X(_) => GateKind::X,
            Gate::Y(_) => GateKind::Y,
            Gate::Z(_) => GateKind::Z,
            Gate::Unitary { .. } => GateKind::Unitary,
            Gate::Delay { .. } => GateKind::Delay,
        }
    }

    /// Single-qubit Pauli gate.
    pub fn pauli(qubit: usize, p: Pauli) -> Option<Gate> {
        match p {
            Pauli::I => None,
            Pauli::X => Some(Gate::X(qubit)),
            Pauli::Y => Some(Gate::Y(qubit)),
            Pauli::Z => Some(Gate::Z(qubit)),
        }
    }

    pub fn unitary(qubits: Vec<usize>, matrix: CMatrix) -> Result<Gate> {
        if matrix.nrows() != 1 << qubits.len() {
            return Err(Error::ArityMismatch {
                arity: matrix.nrows().trailing_zeros() as usize,
                qubits: qubits.len(),
            });
        }
        if !dense::is_unitary(&matrix, 1e-10) {
            return Err(Error::InvalidParameter(
                "custom gate matrix is not unitary".into(),
            ));
        }
        Ok(Gate::Unitary {
            qubits,
            matrix: Arc::new(matrix),
        })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::Delay { qubit, .. } => vec![*qubit],
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
                vec![*q]
            }
            Gate::Rzz { a, b, .. } => vec![*a, *b],
            Gate::Rzx {
                control, target, ..
            }
            | Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Unitary { qubits, .. } => qubits.clone(),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rx { theta, .. }
            | Gate::Ry { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::Rzz { theta, .. }
            | Gate::Rzx { theta, .. } => Some(*theta),
            _ => None,
        }
    }

    /// Same gate with the rotation angle replaced. Non-rotations are returned
    /// unchanged.
    pub fn with_angle(&self, new: f64) -> Gate {
        let mut g = self.clone();
        match &mut g {
            Gate::Rx { theta, .. }
            | Gate::Ry { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::Rzz { theta, .. }
            | Gate::Rzx { theta, .. } => *theta = new,
            _ => {}
        }
        g
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().len() == 2
    }

    /// Pauli generator `P` of a rotation `exp(-iθP/2)`, over [`Gate::qubits`].
    pub fn generator(&self) -> Option<PauliString> {
        let letters = match self.kind() {
            GateKind::Rx => vec![Pauli::X],
            GateKind::Ry => vec![Pauli::Y],
            GateKind::Rz => vec![Pauli::Z],
            GateKind::Rzz => vec![Pauli::Z, Pauli::Z],
            GateKind::Rzx => vec![Pauli::Z, Pauli::X],
            _ => return None,
        };
        Some(PauliString::new(letters))
    }

    /// Unitary on [`Gate::qubits`], first listed qubit most significant.
    pub fn local_matrix(&self) -> CMatrix {
        let c = |x: f64| Complex64::new(x, 0.0);
        match self {
            Gate::Rx { theta, .. } => {
                let (s, co) = (theta / 2.0).sin_cos();
                dense::from_rows(&[&[c(co), -I * s], &[-I * s, c(co)]])
            }
            Gate::Ry { theta, .. } => {
                let (s, co) = (theta / 2.0).sin_cos();
                dense::from_rows(&[&[c(co), c(-s)], &[c(s), c(co)]])
            }
            Gate::Rz { theta, .. } => {
                let m = Complex64::from_polar(1.0, -theta / 2.0);
                dense::from_rows(&[&[m, ZERO], &[ZERO, m.conj()]])
            }
            Gate::Rzz { theta, .. } => {
                let m = Complex64::from_polar(1.0, -theta / 2.0);
                let p = m.conj();
                CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![m, p, p, m]))
            }
            Gate::Rzx { theta, .. } => {
                let (s, co) = (theta / 2.0).sin_cos();
                let mut u = CMatrix::zeros(4, 4);
                for (block, sign) in [(0usize, 1.0), (2usize, -1.0)] {
                    u[(block, block)] = c(co);
                    u[(block + 1, block + 1)] = c(co);
                    u[(block, block + 1)] = -I * (sign * s);
                    u[(block + 1, block)] = -I * (sign * s);
                }
                u
            }
            Gate::Cnot { .. } => dense::from_rows(&[
                &[ONE, ZERO, ZERO, ZERO],
                &[ZERO, ONE, ZERO, ZERO],
                &[ZERO, ZERO, ZERO, ONE],
                &[ZERO, ZERO, ONE, ZERO],
            ]),
            Gate::H(_) => {
                let h = c(FRAC_1_SQRT_2);
                dense::from_rows(&[&[h, h], &[h, -h]])
            }
            Gate::S(_) => dense::from_rows(&[&[ONE, ZERO], &[ZERO, I]]),
            Gate::Sdg(_) => dense::from_rows(&[&[ONE, ZERO], &[ZERO, -I]]),
            Gate::X(_) => Pauli::X.matrix(),
            Gate::Y(_) => Pauli::Y.matrix(),
            Gate::Z(_) => Pauli::Z.matrix(),
            Gate::Unitary { matrix, .. } => (**matrix).clone(),
            Gate::Delay { .. } => dense::identity(2),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::Unitary { qubits, matrix } => Gate::Unitary {
                qubits: qubits.clone(),
                matrix: Arc::new(matrix.adjoint()),
            },
            g => match g.angle() {
                Some(theta) => g.with_angle(-theta),
                None => g.clone(),
            },
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let qubits = self.qubits();
        for (k, &q) in qubits.iter().enumerate() {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
            if qubits[..k].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        if let Some(theta) = self.angle() {
            if !theta.is_finite() {
                return Err(Error::NonFiniteAngle(theta));
            }
        }
        if let Gate::Delay { ns, .. } = self {
            if !ns.is_finite() || *ns < 0.0 {
                return Err(Error::InvalidParameter(format!("delay of {ns} ns")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &CMatrix, b: &CMatrix) -> bool {
        dense::max_abs_diff(a, b) < 1e-12
    }

    #[test]
    fn rotations_match_generator_exponential() {
        for g in [
            Gate::Rx {
                qubit: 0,
                theta: 0.7,
            },
            Gate::Ry {
                qubit: 0,
                theta: -1.3,
            },
            Gate::Rz {
                qubit: 0,
                theta: 2.1,
            },
            Gate::Rzz {
                a: 0,
                b: 1,
                theta: 2.0,
            },
            Gate::Rzx {
                control: 0,
                target: 1,
                theta: 0.4,
            },
        ] {
            let gen = g.generator().unwrap().matrix();
            let expected = dense::expm_hermitian(&gen, g.angle().unwrap() / 2.0);
            assert!(close(&g.local_matrix(), &expected), "{g:?}");
        }
    }

    #[test]
    fn hssh_is_x_up_to_phase() {
        let h = Gate::H(0).local_matrix();
        let s = Gate::S(0).local_matrix();
        let m = &h * &s * &s * &h;
        assert!(dense::phase_insensitive_diff(&m, &Pauli::X.matrix()) < 1e-12);
    }

    #[test]
    fn inverse_undoes_gate() {
        for g in [
            Gate::Rzz {
                a: 0,
                b: 1,
                theta: 2.0,
            },
            Gate::Rzx {
                control: 0,
                target: 1,
                theta: 1.1,
            },
            Gate::Cnot {
                control: 0,
                target: 1,
            },
            Gate::S(0),
            Gate::H(0),
        ] {
            let prod = g.inverse().local_matrix() * g.local_matrix();
            assert!(close(&prod, &dense::identity(prod.nrows())), "{g:?}");
        }
    }

    #[test]
    fn scaled_rzx_realizes_rzz() {
        let theta = 1.7;
        let n = 2;
        let seq = [
            Gate::Ry {
                qubit: 1,
                theta: PI / 2.0,
            },
            Gate::Rzx {
                control: 0,
                target: 1,
                theta,
            },
            Gate::Ry {
                qubit: 1,
                theta: -PI / 2.0,
            },
        ];
        let u = seq.iter().fold(dense::identity(4), |acc, g| {
            dense::embed(&g.local_matrix(), &g.qubits(), n) * acc
        });
        let rzz = Gate::Rzz { a: 0, b: 1, theta }.local_matrix();
        assert!(close(&u, &rzz));
    }

    #[test]
    fn validation_rejects_bad_gates() {
        assert!(matches!(
            Gate::Cnot {
                control: 0,
                target: 0
            }
            .validate(2),
            Err(Error::DuplicateQubit(0))
        ));
        assert!(matches!(
            Gate::H(3).validate(2),
            Err(Error::QubitOutOfRange { qubit: 3, width: 2 })
        ));
        assert!(matches!(
            Gate::Rx {
                qubit: 0,
                theta: f64::NAN
            }
            .validate(1),
            Err(Error::NonFiniteAngle(_))
        ));
    }
}
