//! Small dense complex matrices used for oracles, channels and tomography.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn from_rows(rows: &[&[Complex64]]) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, rows[0].len(), |r, c| rows[r][c])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Lifts `op`, acting on `qubits` (first listed = most significant local
/// bit), to the full `n`-qubit space.
pub fn embed(op: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let k = qubits.len();
    assert_eq!(
        op.nrows(),
        1 << k,
        "operator size does not match qubit list"
    );
    let dim = 1usize << n;
    let masks: Vec<usize> = qubits.iter().map(|&q| 1usize << (n - 1 - q)).collect();
    let target_mask: usize = masks.iter().sum();
    let local = |idx: usize| -> usize {
        masks
            .iter()
            .fold(0usize, |acc, &m| (acc << 1) | usize::from(idx & m != 0))
    };
    let global = |base: usize, loc: usize| -> usize {
        masks.iter().enumerate().fold(base, |acc, (j, &m)| {
            if loc >> (k - 1 - j) & 1 == 1 {
                acc | m
            } else {
                acc
            }
        })
    };
    let mut out = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        let lr = local(r);
        let base = r & !target_mask;
        for lc in 0..(1usize << k) {
            let v = op[(lr, lc)];
            if v != ZERO {
                out[(r, global(base, lc))] = v;
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(&(m.adjoint() * m), &identity(m.nrows())) <= tol
}

/// Distance between `a` and `b` after removing the best global phase.
pub fn phase_insensitive_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    max_abs_diff(&a.map(|x| x * phase), b)
}

/// `exp(-i h t)` for Hermitian `h` via eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases =
        CMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
    v * phases * v.adjoint()
}
