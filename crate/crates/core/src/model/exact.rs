use num_complex::Complex64;

use super::hamiltonian::{diagonal, HamiltonianForm, MAX_DENSE_SITES};
use super::params::ModelParams;
use super::trotter::{neel_state, NeelVariant};
use crate::qsim::Statevector;
use crate::{Error, Result};

/// Eigendecomposition of the chain Hamiltonian, reusable across times.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    sites: usize,
    energies: Vec<f64>,
    /// Eigenvectors, column-major.
    vectors: Vec<f64>,
}

impl ExactPropagator {
    pub fn new(p: &ModelParams) -> Result<Self> {
        p.validate()?;
        if p.sites > MAX_DENSE_SITES {
            return Err(Error::TooLarge {
                what: "exact evolution sites",
                size: p.sites,
                max: MAX_DENSE_SITES,
            });
        }
        let l = p.sites;
        let dim = 1usize << l;
        let diag = diagonal(p, HamiltonianForm::Spin);
        let h = faer::Mat::<f64>::from_fn(dim, dim, |r, c| {
            if r == c {
                diag[r]
            } else if (r ^ c).count_ones() == 1 {
                p.omega
            } else {
                0.0
            }
        });
        let eig = h
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::SingularMatrix(format!("eigendecomposition failed: {e:?}")))?;
        let u = eig.U();
        let s = eig.S().column_vector();
        let energies = (0..dim).map(|k| s[k]).collect();
        let mut vectors = Vec::with_capacity(dim * dim);
        for k in 0..dim {
            vectors.extend((0..dim).map(|r| u[(r, k)]));
        }
        Ok(Self {
            sites: l,
            energies,
            vectors,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `e^{-iHt} |initial⟩`.
    pub fn evolve(&self, initial: &Statevector, t: f64) -> Result<Statevector> {
        if initial.width() != self.sites {
            return Err(Error::WidthMismatch {
                expected: self.sites,
                found: initial.width(),
            });
        }
        let dim = self.energies.len();
        let psi = initial.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (k, col) in self.vectors.chunks_exact(dim).enumerate() {
            let overlap: Complex64 = col.iter().zip(psi).map(|(&v, &a)| a * v).sum();
            let c = overlap * Complex64::from_polar(1.0, -self.energies[k] * t);
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(col) {
                *o += c * v;
            }
        }
        Ok(Statevector::from_unnormalized(self.sites, out))
    }
}

/// `e^{-iHt} |Z2⟩`.
pub fn exact_evolve(p: &ModelParams, t: f64) -> Result<Statevector> {
    ExactPropagator::new(p)?.evolve(&neel_state(p.sites, NeelVariant::Z2), t)
}
