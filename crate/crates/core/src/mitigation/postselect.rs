//! Fibonacci-subspace postselection.

use serde::Serialize;

use crate::model::fibonacci::is_fibonacci;
use crate::qsim::Counts;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Postselected {
    pub counts: Counts,
    pub retained_fraction: f64,
}

/// Keeps bitstrings without two adjacent 1s.
pub fn postselect(counts: &Counts) -> Result<Postselected> {
    let kept = counts.filter(is_fibonacci);
    let total = counts.total();
    let retained = kept.total();
    if kept.is_empty() || retained <= 0.0 {
        return Err(Error::EmptyPostselection);
    }
    Ok(Postselected {
        retained_fraction: if total > 0.0 { retained / total } else { 0.0 },
        counts: kept,
    })
}
