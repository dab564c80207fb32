use num_complex::Complex64;

use crate::qsim::{Statevector, MAX_WIDTH};
use crate::{Error, Result};

/// True if the basis index has no two adjacent excitations.
#[inline]
pub fn is_fibonacci(index: usize) -> bool {
    index & (index >> 1) == 0
}

/// Basis states of the constrained subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct FibonacciMask {
    sites: usize,
    allowed: Vec<bool>,
    dimension: usize,
}

impl FibonacciMask {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn contains(&self, index: usize) -> bool {
        self.allowed[index]
    }
}

pub fn fibonacci_projector(sites: usize) -> Result<FibonacciMask> {
    if sites > MAX_WIDTH {
        return Err(Error::TooLarge {
            what: "Fibonacci mask sites",
            size: sites,
            max: MAX_WIDTH,
        });
    }
    let allowed: Vec<bool> = (0..1usize << sites).map(is_fibonacci).collect();
    let dimension = allowed.iter().filter(|&&a| a).count();
    Ok(FibonacciMask {
        sites,
        allowed,
        dimension,
    })
}

/// Result of projecting onto the subspace. `state` is `None` when the weight
/// vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub weight: f64,
    pub state: Option<Statevector>,
}

pub fn project(state: &Statevector, mask: &FibonacciMask) -> Result<Projection> {
    if state.width() != mask.sites {
        return Err(Error::WidthMismatch {
            expected: mask.sites,
            found: state.width(),
        });
    }
    let amps: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if mask.allowed[i] {
                a
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let state = (weight > 0.0).then(|| Statevector::from_unnormalized(mask.sites, amps));
    Ok(Projection { weight, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{neel_state, NeelVariant};

    #[test]
    fn dimension_follows_recursion() {
        let (mut a, mut b) = (2usize, 3usize);
        for l in 1..=14 {
            let expected = match l {
                1 => 2,
                2 => 3,
                _ => {
                    let c = a + b;
                    a = b;
                    b = c;
                    c
                }
            };
            assert_eq!(
                fibonacci_projector(l).unwrap().dimension(),
                expected,
                "L={l}"
            );
        }
        assert_eq!(fibonacci_projector(5).unwrap().dimension(), 13);
    }

    #[test]
    fn neel_state_has_unit_weight() {
        let mask = fibonacci_projector(6).unwrap();
        let p = project(&neel_state(6, NeelVariant::Z2), &mask).unwrap();
        assert_eq!(p.weight, 1.0);
    }

    #[test]
    fn zero_weight_is_flagged() {
        let mask = fibonacci_projector(3).unwrap();
        let p = project(&Statevector::from_bitstring("110").unwrap(), &mask).unwrap();
        assert_eq!(p.weight, 0.0);
        assert!(p.state.is_none());
    }
}
