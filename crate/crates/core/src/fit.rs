//! Straight-line least squares with parameter covariance.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    /// Covariance of `(intercept, slope)`.
    pub covariance: [[f64; 2]; 2],
    pub residual_sum_squares: f64,
    pub weighted: bool,
}

impl LinearFit {
    pub fn intercept_std(&self) -> f64 {
        self.covariance[0][0].max(0.0).sqrt()
    }

    pub fn slope_std(&self) -> f64 {
        self.covariance[1][1].max(0.0).sqrt()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Fits `y = a + b x`.
///
/// With `sigma`, points are weighted by `1/sigma^2` and the covariance is
/// `(X^T W X)^-1` (sigmas taken as absolute). Without it, the covariance is
/// scaled by the residual variance `RSS / (n - 2)`.
pub fn linear_fit(x: &[f64], y: &[f64], sigma: Option<&[f64]>) -> Result<LinearFit> {
    if x.len() != y.len() || sigma.is_some_and(|s| s.len() != x.len()) {
        return Err(Error::InvalidParameter(
            "fit inputs differ in length".into(),
        ));
    }
    if x.len() < 2 {
        return Err(Error::DegenerateFit("need at least two points".into()));
    }
    if let Some(s) = sigma {
        if s.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParameter("sigmas must be positive".into()));
        }
    }
    let weight = |i: usize| sigma.map_or(1.0, |s| 1.0 / (s[i] * s[i]));
    let sw: f64 = (0..x.len()).map(weight).sum();
    let xbar = (0..x.len()).map(|i| weight(i) * x[i]).sum::<f64>() / sw;
    let ybar = (0..x.len()).map(|i| weight(i) * y[i]).sum::<f64>() / sw;
    // Two-pass centered sums stay accurate when weights span many decades.
    let sxx_c: f64 = (0..x.len())
        .map(|i| weight(i) * (x[i] - xbar).powi(2))
        .sum();
    let sxy_c: f64 = (0..x.len())
        .map(|i| weight(i) * (x[i] - xbar) * (y[i] - ybar))
        .sum();
    if x.iter().all(|&v| v == x[0]) || !(sxx_c > 0.0 && sxx_c.is_finite()) {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy_c / sxx_c;
    let intercept = ybar - slope * xbar;
    let rss: f64 = (0..x.len())
        .map(|i| weight(i) * (y[i] - intercept - slope * x[i]).powi(2))
        .sum();
    let mut cov = [
        [1.0 / sw + xbar * xbar / sxx_c, -xbar / sxx_c],
        [-xbar / sxx_c, 1.0 / sxx_c],
    ];
    if sigma.is_none() {
        let dof = x.len().saturating_sub(2);
        let s2 = if dof > 0 { rss / dof as f64 } else { 0.0 };
        for row in cov.iter_mut() {
            for v in row.iter_mut() {
                *v *= s2;
            }
        }
    }
    Ok(LinearFit {
        intercept,
        slope,
        covariance: cov,
        residual_sum_squares: rss,
        weighted: sigma.is_some(),
    })
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n - 1 denominator); zero for fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}
