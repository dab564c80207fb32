use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::dense::{self, CMatrix, I as IM, ONE, ZERO};
use crate::{Error, Result};

/// Single-qubit Pauli, indexed `I=0, X=1, Y=2, Z=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Result<Self> {
        Self::ALL
            .get(index)
            .copied()
            .ok_or(Error::InvalidPauliIndex(index))
    }

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => dense::identity(2),
            Pauli::X => dense::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
            Pauli::Y => dense::from_rows(&[&[ZERO, -IM], &[IM, ZERO]]),
            Pauli::Z => dense::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }

    /// `self * other = phase * result`.
    pub fn mul(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (a, b) if a == b => (ONE, I),
            (X, Y) => (IM, Z),
            (Y, X) => (-IM, Z),
            (Y, Z) => (IM, X),
            (Z, Y) => (-IM, X),
            (Z, X) => (IM, Y),
            (X, Z) => (-IM, Y),
            _ => unreachable!(),
        }
    }

    fn letter(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index()]
    }
}

/// Tensor product of single-qubit Paulis with a ±1 sign. Letter `k` acts on
/// qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    negative: bool,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self {
            letters,
            negative: false,
        }
    }

    pub fn identity(width: usize) -> Self {
        Self::new(vec![Pauli::I; width])
    }

    /// Single non-identity letter on `qubit`.
    pub fn single(width: usize, qubit: usize, p: Pauli) -> Self {
        let mut letters = vec![Pauli::I; width];
        letters[qubit] = p;
        Self::new(letters)
    }

    /// Base-4 digits of `index`, first qubit most significant.
    pub fn from_index(index: usize, width: usize) -> Self {
        let letters = (0..width)
            .map(|k| Pauli::ALL[(index >> (2 * (width - 1 - k))) & 3])
            .collect();
        Self::new(letters)
    }

    pub fn index(&self) -> usize {
        self.letters
            .iter()
            .fold(0usize, |acc, p| (acc << 2) | p.index())
    }

    pub fn negated(mut self) -> Self {
        self.negative = !self.negative;
        self
    }

    pub fn width(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| !a.commutes_with(**b))
            .count();
        anti % 2 == 0
    }

    pub fn matrix(&self) -> CMatrix {
        let m = self
            .letters
            .iter()
            .fold(dense::identity(1), |acc, p| dense::kron(&acc, &p.matrix()));
        m * Complex64::new(self.sign(), 0.0)
    }

    /// All `4^width` unsigned strings in index order.
    pub fn all(width: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * width)).map(move |i| PauliString::from_index(i, width))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let letters = body
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidParameter(format!(
                    "bad Pauli letter `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { letters, negative })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        self.letters
            .iter()
            .try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_match_matrices() {
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let (phase, c) = a.mul(b);
                let lhs = a.matrix() * b.matrix();
                let rhs = c.matrix() * phase;
                assert!(dense::max_abs_diff(&lhs, &rhs) < 1e-15, "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn index_round_trip_and_parse() {
        for i in 0..16 {
            assert_eq!(PauliString::from_index(i, 2).index(), i);
        }
        let p: PauliString = "-XZ".parse().unwrap();
        assert_eq!(p.to_string(), "-XZ");
        assert_eq!(p.sign(), -1.0);
        assert_eq!(p.index(), 4 + 3);
    }

    #[test]
    fn string_commutation_counts_anticommuting_sites() {
        let zz: PauliString = "ZZ".parse().unwrap();
        assert!(zz.commutes_with(&"XX".parse().unwrap()));
        assert!(!zz.commutes_with(&"XI".parse().unwrap()));
        assert!(zz.commutes_with(&"ZI".parse().unwrap()));
    }
}
