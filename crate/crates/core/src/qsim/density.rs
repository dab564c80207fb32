use num_complex::Complex64;

use super::dense::{self, CMatrix, ONE};
use super::pauli::PauliString;
use super::state::Statevector;
use crate::{Error, Result};

/// Largest register handled by dense density-matrix algebra.
pub const MAX_DENSITY_QUBITS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n: usize,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        let n = dim.trailing_zeros() as usize;
        if !matrix.is_square() || dim != 1 << n {
            return Err(Error::InvalidState(
                "density matrix must be 2^n square".into(),
            ));
        }
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::TooLarge {
                what: "density operator qubits",
                size: n,
                max: MAX_DENSITY_QUBITS,
            });
        }
        let herm = dense::max_abs_diff(&matrix, &matrix.adjoint());
        if herm > 1e-12 {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:.2e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > 1e-12 {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min_eig = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig}"
            )));
        }
        Ok(Self { n, matrix })
    }

    pub fn pure(state: &Statevector) -> Result<Self> {
        if state.width() > MAX_DENSITY_QUBITS {
            return Err(Error::TooLarge {
                what: "density operator qubits",
                size: state.width(),
                max: MAX_DENSITY_QUBITS,
            });
        }
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Ok(Self {
            n: state.width(),
            matrix: &v * v.adjoint(),
        })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        Self {
            n,
            matrix: dense::identity(d) * Complex64::new(1.0 / d as f64, 0.0),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Probabilities of computational basis outcomes.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.matrix.nrows())
            .map(|i| self.matrix[(i, i)].re)
            .collect()
    }

    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        (op * &self.matrix).trace()
    }

    /// `U ρ U†` with `u` acting on `qubits`.
    pub fn apply_unitary(&mut self, u: &CMatrix, qubits: &[usize]) {
        let full = dense::embed(u, qubits, self.n);
        self.matrix = &full * &self.matrix * full.adjoint();
    }

    /// Applies the channel without re-validating positivity; trace
    /// preservation is guaranteed by [`KrausChannel`] construction.
    pub fn apply_channel(&mut self, ch: &KrausChannel, qubits: &[usize]) -> Result<()> {
        if ch.arity != qubits.len() {
            return Err(Error::ArityMismatch {
                arity: ch.arity,
                qubits: qubits.len(),
            });
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.n) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                width: self.n,
            });
        }
        let mut out = CMatrix::zeros(self.matrix.nrows(), self.matrix.ncols());
        for e in &ch.ops {
            let full = dense::embed(e, qubits, self.n);
            out += &full * &self.matrix * full.adjoint();
        }
        self.matrix = out;
        Ok(())
    }
}

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    arity: usize,
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let dim = ops.first().map(|m| m.nrows()).ok_or_else(|| {
            Error::InvalidParameter("channel needs at least one Kraus operator".into())
        })?;
        let arity = dim.trailing_zeros() as usize;
        if dim != 1 << arity || ops.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::InvalidParameter(
                "Kraus operators must share a 2^n square shape".into(),
            ));
        }
        let sum = ops
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, e| acc + e.adjoint() * e);
        let dev = dense::max_abs_diff(&sum, &dense::identity(dim));
        if dev > 1e-10 {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { arity, ops })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            arity: n,
            ops: vec![dense::identity(1 << n)],
        }
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Mixture of Pauli strings. `probs[k]` weights the string with base-4
    /// index `k` (see [`PauliString::from_index`]).
    pub fn pauli(n: usize, probs: &[f64]) -> Result<Self> {
        if probs.len() != 1 << (2 * n) {
            return Err(Error::InvalidProbability(format!(
                "expected {} Pauli probabilities, got {}",
                1usize << (2 * n),
                probs.len()
            )));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidProbability(
                "Pauli probability outside [0, 1]".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!(
                "Pauli probabilities sum to {total}"
            )));
        }
        let ops = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| PauliString::from_index(k, n).matrix() * Complex64::new(p.sqrt(), 0.0))
            .collect();
        Self::new(ops)
    }

    /// `(1 − p) ρ + p I/d`, i.e. PTM `diag(1, 1 − p, ...)`.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        Self::pauli(n, &depolarizing_probabilities(n, p)?)
    }

    /// `(1 − p) ρ + p Z ρ Z` on one qubit.
    pub fn dephasing(p: f64) -> Result<Self> {
        Self::pauli(1, &[1.0 - p, 0.0, 0.0, p])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.ops
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &KrausChannel) -> Result<Self> {
        if self.arity != next.arity {
            return Err(Error::ArityMismatch {
                arity: next.arity,
                qubits: self.arity,
            });
        }
        let ops = next
            .ops
            .iter()
            .flat_map(|f| self.ops.iter().map(move |e| f * e))
            .collect();
        Ok(Self {
            arity: self.arity,
            ops,
        })
    }

    /// Applies the channel to an arbitrary (not necessarily physical) operator.
    pub fn apply_to(&self, op: &CMatrix) -> CMatrix {
        self.ops
            .iter()
            .fold(CMatrix::zeros(op.nrows(), op.ncols()), |acc, e| {
                acc + e * op * e.adjoint()
            })
    }
}

/// Pauli probabilities of the depolarizing channel with PTM `diag(1, 1−p, ...)`.
pub fn depolarizing_probabilities(n: usize, p: f64) -> Result<Vec<f64>> {
    let d2 = 1usize << (2 * n);
    let max = d2 as f64 / (d2 as f64 - 1.0);
    if !(0.0..=max).contains(&p) {
        return Err(Error::InvalidProbability(format!("depolarizing p = {p}")));
    }
    let each = p / d2 as f64;
    let mut probs = vec![each; d2];
    probs[0] = 1.0 - p + each;
    Ok(probs)
}

pub fn apply_channel(
    rho: &DensityOperator,
    ch: &KrausChannel,
    qubits: &[usize],
) -> Result<DensityOperator> {
    let mut out = rho.clone();
    out.apply_channel(ch, qubits)?;
    Ok(out)
}

/// Pauli transfer matrix `R[a][b] = Tr[P_a ch(P_b)] / 2^n` in base-4 index
/// order.
pub fn pauli_transfer_matrix(ch: &KrausChannel) -> Result<nalgebra::DMatrix<f64>> {
    let n = ch.arity;
    if n > 2 {
        return Err(Error::TooLarge {
            what: "PTM qubits",
            size: n,
            max: 2,
        });
    }
    let paulis: Vec<CMatrix> = PauliString::all(n).map(|p| p.matrix()).collect();
    let d = (1usize << n) as f64;
    let images: Vec<CMatrix> = paulis.iter().map(|p| ch.apply_to(p)).collect();
    Ok(nalgebra::DMatrix::from_fn(
        paulis.len(),
        paulis.len(),
        |a, b| (&paulis[a] * &images[b]).trace().re / d,
    ))
}

/// Largest absolute off-diagonal entry.
pub fn max_off_diagonal(m: &nalgebra::DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if r != c {
                worst = worst.max(m[(r, c)].abs());
            }
        }
    }
    worst
}

/// A channel is Pauli-stochastic iff its PTM is diagonal.
pub fn is_pauli_stochastic(ptm: &nalgebra::DMatrix<f64>, tol: f64) -> bool {
    max_off_diagonal(ptm) <= tol
}
