//! Accumulated error `D(t)` between a reference and a measured per-site
//! magnetization history.

use serde::{Deserialize, Serialize};

use super::series::TimeSeries;
use crate::{Error, Result};

/// Per-site values on a step grid: `values[k][q]` at `steps[k]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SiteSeries {
    pub steps: Vec<usize>,
    pub vt: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub std: Vec<Vec<f64>>,
}

impl SiteSeries {
    pub fn push(&mut self, step: usize, vt: f64, values: Vec<f64>, std: Vec<f64>) {
        self.steps.push(step);
        self.vt.push(vt);
        self.values.push(values);
        self.std.push(std);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Running mean of `f_k = (1/L) Σ_i Δ_{k,i}²` over steps `1..=n`; the first
/// grid point reports `f_0` itself. Errors propagate to first order from the
/// measured per-site std.
pub fn accumulated_error(measured: &SiteSeries, reference: &SiteSeries) -> Result<TimeSeries> {
    if measured.steps != reference.steps || measured.values.len() != measured.std.len() {
        return Err(Error::GridMismatch);
    }
    let mut out = TimeSeries::new("accumulated_error");
    let (mut sum, mut var_sum) = (0.0, 0.0);
    for k in 0..measured.len() {
        let (m, r, s) = (&measured.values[k], &reference.values[k], &measured.std[k]);
        if m.len() != r.len() || m.len() != s.len() || m.is_empty() {
            return Err(Error::GridMismatch);
        }
        let l = m.len() as f64;
        let f: f64 = m.iter().zip(r).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / l;
        let var_f: f64 = m
            .iter()
            .zip(r)
            .zip(s)
            .map(|((a, b), sd)| (2.0 * (a - b) * sd / l).powi(2))
            .sum();
        let (d, sd) = if k == 0 {
            (f, var_f.sqrt())
        } else {
            sum += f;
            var_sum += var_f;
            (sum / k as f64, var_sum.sqrt() / k as f64)
        };
        out.push_real(measured.steps[k], measured.vt[k], d, sd)?;
    }
    Ok(out)
}
