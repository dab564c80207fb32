//! Linear zero-noise extrapolation.

use serde::{Deserialize, Serialize};

use crate::fit::{linear_fit, mean, sample_std, LinearFit};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZnePoint {
    pub lambda: f64,
    pub value: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneResult {
    pub intercept: f64,
    pub slope: f64,
    pub covariance: [[f64; 2]; 2],
    pub weighted: bool,
    /// Raw samples per scale factor, when the fit came from samples.
    pub samples: Vec<(f64, Vec<f64>)>,
}

impl ZneResult {
    pub fn intercept_std(&self) -> f64 {
        self.covariance[0][0].max(0.0).sqrt()
    }

    pub fn slope_std(&self) -> f64 {
        self.covariance[1][1].max(0.0).sqrt()
    }

    fn from_fit(fit: LinearFit, samples: Vec<(f64, Vec<f64>)>) -> Self {
        Self {
            intercept: fit.intercept,
            slope: fit.slope,
            covariance: fit.covariance,
            weighted: fit.weighted,
            samples,
        }
    }
}

fn check_lambdas<'a>(lambdas: impl Iterator<Item = &'a f64>) -> Result<()> {
    let mut first = None;
    let mut distinct = false;
    for &l in lambdas {
        if !(l >= 1.0) || !l.is_finite() {
            return Err(Error::InvalidScaleFactor(l));
        }
        match first {
            None => first = Some(l),
            Some(f) if f != l => distinct = true,
            _ => {}
        }
    }
    if distinct {
        Ok(())
    } else {
        Err(Error::DegenerateFit(
            "need at least two distinct scale factors".into(),
        ))
    }
}

/// Fits `value = a + b·λ`; weighted by `1/σ²` unless some `σ` is zero.
pub fn zne_extrapolate(points: &[ZnePoint]) -> Result<ZneResult> {
    check_lambdas(points.iter().map(|p| &p.lambda))?;
    let x: Vec<f64> = points.iter().map(|p| p.lambda).collect();
    let y: Vec<f64> = points.iter().map(|p| p.value).collect();
    let s: Vec<f64> = points.iter().map(|p| p.sigma).collect();
    let weighted = s.iter().all(|&v| v > 0.0);
    let fit = linear_fit(&x, &y, weighted.then_some(s.as_slice()))?;
    Ok(ZneResult::from_fit(fit, Vec::new()))
}

/// Fits every sample; each sample carries the sample std of its λ group.
pub fn zne_from_samples(groups: &[(f64, Vec<f64>)], weighted: bool) -> Result<ZneResult> {
    check_lambdas(groups.iter().map(|(l, _)| l))?;
    let mut points = Vec::new();
    for (lambda, values) in groups {
        if values.is_empty() {
            return Err(Error::DegenerateFit(format!("no samples at λ = {lambda}")));
        }
        let sigma = if weighted { sample_std(values) } else { 0.0 };
        points.extend(values.iter().map(|&value| ZnePoint {
            lambda: *lambda,
            value,
            sigma,
        }));
    }
    let mut r = zne_extrapolate(&points)?;
    r.samples = groups.to_vec();
    Ok(r)
}

/// Mean value per scale factor, useful for plots next to the fit.
pub fn group_means(groups: &[(f64, Vec<f64>)]) -> Vec<(f64, f64)> {
    groups.iter().map(|(l, v)| (*l, mean(v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    fn pts(v: &[(f64, f64)], sigma: f64) -> Vec<ZnePoint> {
        v.iter()
            .map(|&(lambda, value)| ZnePoint {
                lambda,
                value,
                sigma,
            })
            .collect()
    }

    #[test]
    fn exact_line() {
        let r = zne_extrapolate(&pts(&[(1.0, 0.9), (1.5, 0.85), (2.0, 0.8)], 0.01)).unwrap();
        assert!((r.intercept - 1.0).abs() < 1e-12);
        assert!((r.slope + 0.1).abs() < 1e-12);
        assert!(r.weighted);
    }

    #[test]
    fn constant_values() {
        let r = zne_extrapolate(&pts(&[(1.0, 0.3), (1.5, 0.3), (2.0, 0.3)], 0.0)).unwrap();
        assert!((r.intercept - 0.3).abs() < 1e-12);
        assert!(r.slope.abs() < 1e-12);
        assert!(!r.weighted);
    }

    #[test]
    fn degenerate_lambdas() {
        assert!(zne_extrapolate(&pts(&[(1.5, 0.3), (1.5, 0.4)], 0.1)).is_err());
        assert!(zne_extrapolate(&pts(&[(0.5, 0.3), (1.5, 0.4)], 0.1)).is_err());
    }

    #[test]
    fn quoted_error_is_calibrated() {
        let (a, b, sigma) = (0.8, -0.2, 0.05);
        let noise = Normal::new(0.0, sigma).unwrap();
        let mut rng = crate::seed::rng(77, &[]);
        let mut within = 0;
        let trials = 1000;
        for _ in 0..trials {
            let groups: Vec<(f64, Vec<f64>)> = [1.0, 1.5, 2.0]
                .iter()
                .map(|&l| {
                    (
                        l,
                        (0..10)
                            .map(|_| a + b * l + noise.sample(&mut rng))
                            .collect(),
                    )
                })
                .collect();
            let r = zne_from_samples(&groups, true).unwrap();
            if (r.intercept - a).abs() <= 3.0 * r.intercept_std() {
                within += 1;
            }
        }
        // 3σ coverage is ~99.7%; allow sampling slack.
        assert!(within as f64 / trials as f64 > 0.98, "{within}");
    }
}
