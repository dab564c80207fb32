use serde::{Deserialize, Serialize};

use super::dense::CMatrix;
use super::gate::Gate;
use super::state::Statevector;
use crate::{Error, Result};

/// An idle window on one qubit. `position` is the index in
/// [`Circuit::gates`] of the `Delay` gate representing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdleInterval {
    pub qubit: usize,
    /// Schedule time at which the idle window opens, in ns.
    pub start: f64,
    pub length: f64,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    idle_intervals: Vec<IdleInterval>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            idle_intervals: Vec::new(),
        }
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn idle_intervals(&self) -> &[IdleInterval] {
        &self.idle_intervals
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `other`'s gates. Idle annotations of `other` are shifted to the
    /// new positions.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.width != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        let offset = self.gates.len();
        self.gates.extend(other.gates.iter().cloned());
        self.idle_intervals
            .extend(other.idle_intervals.iter().map(|iv| IdleInterval {
                position: iv.position + offset,
                ..*iv
            }));
        Ok(self)
    }

    /// Reversed circuit of inverted gates. Idle annotations are dropped.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            idle_intervals: Vec::new(),
        }
    }

    /// Dense unitary, built column by column from basis states. Delays act
    /// as identity.
    pub fn unitary(&self) -> Result<CMatrix> {
        const MAX: usize = 10;
        if self.width > MAX {
            return Err(Error::TooLarge {
                what: "dense circuit unitary width",
                size: self.width,
                max: MAX,
            });
        }
        let dim = 1usize << self.width;
        let mut u = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut s = Statevector::basis(self.width, col);
            s.run(self)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                u[(row, col)] = *a;
            }
        }
        Ok(u)
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Replaces the idle annotation. Intervals must reference `Delay` gates on
    /// their qubit and may not overlap on any qubit.
    pub fn set_idle_intervals(&mut self, mut intervals: Vec<IdleInterval>) -> Result<()> {
        for iv in &intervals {
            if iv.qubit >= self.width {
                return Err(Error::QubitOutOfRange {
                    qubit: iv.qubit,
                    width: self.width,
                });
            }
            if !(iv.length >= 0.0 && iv.start.is_finite()) {
                return Err(Error::InvalidParameter(format!("idle interval {iv:?}")));
            }
            match self.gates.get(iv.position) {
                Some(Gate::Delay { qubit, .. }) if *qubit == iv.qubit => {}
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "idle interval at gate {} is not a delay on qubit {}",
                        iv.position, iv.qubit
                    )))
                }
            }
        }
        intervals.sort_by(|a, b| (a.qubit, a.start).partial_cmp(&(b.qubit, b.start)).unwrap());
        for pair in intervals.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.qubit == b.qubit && a.start + a.length > b.start + 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "overlapping idle intervals on qubit {}",
                    a.qubit
                )));
            }
        }
        intervals.sort_by_key(|iv| iv.position);
        self.idle_intervals = intervals;
        Ok(())
    }

    /// Decomposes into independently owned parts.
    pub fn into_parts(self) -> (usize, Vec<Gate>, Vec<IdleInterval>) {
        (self.width, self.gates, self.idle_intervals)
    }
}
