//! Connected correlator `C_Y(t)` from the four-branch, two-basis protocol.
//!
//! Each `(source, branch)` pair is one circuit batch measured in both parity
//! bases. Readout mitigation applies; postselection does not, since the
//! branch preparations leave the Fibonacci subspace. Every `⟨(PYP)_j⟩` is
//! extrapolated on its own before assembly, and errors propagate linearly.

use num_complex::Complex64;

use super::config::{ExperimentConfig, Regime};
use super::emit::Report;
use super::runner::{combine_trials, reduce, CircuitBatch, Estimate, Observation, Pipeline};
use crate::model::build_trotter_step;
use crate::observables::{
    assemble_cy, cy_oracle, cy_prep, measurement_basis, pyp_expectation, BranchValues, CyBranch,
    Parity, TimeSeries,
};
use crate::qsim::Counts;
use crate::Result;

const CY_BATCH_TAG: u64 = 0xC7;

fn observe(per_basis: &[Counts], sites: usize, shots: Option<f64>) -> Result<Observation> {
    let mut values = vec![0.0; sites];
    for (counts, parity) in per_basis.iter().zip(Parity::ALL) {
        for (site, v) in pyp_expectation(counts, parity)? {
            values[site - 1] = v;
        }
    }
    let shot_std = values
        .iter()
        .map(|v| shots.map_or(0.0, |n| ((1.0 - v * v).max(0.0) / n).sqrt()))
        .collect();
    Ok(Observation { values, shot_std })
}

/// `C_Y` with first-order errors from per-term estimates. Returns the value,
/// its std and the std of `|C_Y|`.
fn assemble_with_errors(est: &BranchValuesEst, sites: usize) -> Result<(Complex64, f64, f64)> {
    let values: BranchValues = est
        .iter()
        .map(|(k, v)| (*k, v.iter().map(|e| e.value).collect()))
        .collect();
    let c = assemble_cy(&values, sites)?;
    let (mut var_re, mut var_im) = (0.0, 0.0);
    for ((_, branch), v) in est {
        let var: f64 = v.iter().map(|e| 0.25 * e.std * e.std).sum();
        match branch {
            CyBranch::PlusEigen | CyBranch::MinusEigen => var_re += var,
            CyBranch::PlusRotation | CyBranch::MinusRotation => var_im += var,
        }
    }
    let abs = c.norm();
    let abs_std = if abs > 0.0 {
        ((c.re * c.re * var_re + c.im * c.im * var_im) / (abs * abs)).sqrt()
    } else {
        (var_re + var_im).sqrt()
    };
    Ok((c, (var_re + var_im).sqrt(), abs_std))
}

type BranchValuesEst = std::collections::BTreeMap<(usize, CyBranch), Vec<Estimate>>;

/// Per-step estimates of every `⟨(PYP)_j⟩` for `cfg`'s mitigation settings.
fn estimate(
    cfg: &ExperimentConfig,
) -> Result<(Vec<BranchValuesEst>, Vec<crate::mitigation::BatchEntry>)> {
    let pipe = Pipeline::new(cfg)?;
    let p = cfg.model_params()?;
    let step = build_trotter_step(&p, cfg.trotter_options())?;
    let bases = Parity::ALL
        .iter()
        .map(|&par| measurement_basis(cfg.sites, par))
        .collect::<Result<Vec<_>>>()?;
    let shots = (!cfg.infinite_shots).then_some(cfg.shots as f64);
    let mut per_step = vec![BranchValuesEst::new(); cfg.steps + 1];
    let mut manifest = Vec::new();
    for source in Parity::Even.sites(cfg.sites) {
        for (b, branch) in CyBranch::ALL.into_iter().enumerate() {
            let batch = CircuitBatch {
                prep: cy_prep(cfg.sites, source, branch)?,
                step: step.clone(),
                steps: cfg.steps,
                bases: bases.clone(),
                tag: CY_BATCH_TAG << 16 | (source as u64) << 4 | b as u64,
            };
            let mut trials: Vec<Vec<Vec<Estimate>>> = Vec::with_capacity(cfg.trials);
            for trial in 0..cfg.trials {
                let (runs, entries) = pipe.run(&batch, trial)?;
                if trial == 0 {
                    manifest.extend(entries);
                }
                let variants: Vec<_> = runs.iter().map(|r| r.variant).collect();
                let steps = (0..=cfg.steps)
                    .map(|n| {
                        let obs = runs
                            .iter()
                            .map(|r| observe(&r.mitigated[n], cfg.sites, shots).map(Some))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(reduce(&variants, &obs, &cfg.zne_factors, cfg.zne_weighted))
                    })
                    .collect::<Result<Vec<_>>>()?;
                trials.push(steps);
            }
            for (n, slot) in per_step.iter_mut().enumerate() {
                let t: Vec<Vec<Estimate>> = trials.iter().map(|s| s[n].clone()).collect();
                slot.insert((source, branch), combine_trials(&t));
            }
        }
    }
    Ok((per_step, manifest))
}

fn cy_series(
    cfg: &ExperimentConfig,
    per_step: &[BranchValuesEst],
    name: &str,
) -> Result<(TimeSeries, TimeSeries, Vec<usize>)> {
    let mut c = TimeSeries::new(name);
    let mut a = TimeSeries::new(format!("{name}_abs"));
    let mut flagged = Vec::new();
    for (n, est) in per_step.iter().enumerate() {
        let (v, std, abs_std) = assemble_with_errors(est, cfg.sites)?;
        if v.re.is_nan() || v.im.is_nan() {
            flagged.push(n);
        }
        c.push(n, cfg.vt(n), v, std)?;
        a.push_real(n, cfg.vt(n), v.norm(), abs_std)?;
    }
    Ok((c, a, flagged))
}

/// `C_Y(t)` in `regime` (when given, it overrides the model parameters of
/// `cfg`), mitigated and unmitigated, with the noiseless oracle.
pub fn run_cy(cfg: &ExperimentConfig, regime: Option<Regime>) -> Result<Report> {
    let cfg = match regime {
        Some(r) => cfg.clone().with_regime(r),
        None => cfg.clone(),
    };
    cfg.validate()?;
    let (est, manifest) = estimate(&cfg)?;
    let (raw, _) = estimate(&cfg.clone().unmitigated())?;
    let mut report = Report::new("cy", &cfg);
    report.batch = manifest;
    let (c, a, flagged) = cy_series(&cfg, &est, "cy_mitigated")?;
    let (cu, au, _) = cy_series(&cfg, &raw, "cy_unmitigated")?;
    report.flagged_steps = flagged;
    report.series.extend([c, a, cu, au]);

    let p = cfg.model_params()?;
    let oracle = cy_oracle(&p, cfg.trotter_options(), cfg.steps)?;
    let mut o = TimeSeries::new("cy_oracle");
    let mut oa = TimeSeries::new("cy_oracle_abs");
    for (n, v) in oracle.iter().enumerate() {
        o.push(n, cfg.vt(n), *v, 0.0)?;
        oa.push_real(n, cfg.vt(n), v.norm(), 0.0)?;
    }
    report.series.extend([o, oa]);
    Ok(report)
}
