//! Computational-basis experiments from `|Z2⟩`: staggered magnetization,
//! per-site magnetization, accumulated error and the Loschmidt echo.
//!
//! Per variant and step the mitigated counts are postselected (when enabled)
//! and reduced to the observation vector
//! `[Zπ/L, echo(0 flips), echo(1 flip), Fibonacci fraction, Z_1 … Z_L]`,
//! which [`reduce`] then extrapolates component-wise.

use super::config::ExperimentConfig;
use super::emit::Report;
use super::oracle::{reference, zpi_density, Reference};
use super::runner::{combine_trials, reduce, CircuitBatch, Estimate, Observation, Pipeline};
use crate::mitigation::postselect;
use crate::model::fibonacci::is_fibonacci;
use crate::model::{build_trotter_step, neel_prep, NeelVariant};
use crate::observables::{accumulated_error, loschmidt_echo, SiteSeries, TimeSeries};
use crate::qsim::{Circuit, Counts};
use crate::{Error, Result};

const HEAD: usize = 4;
const Z_BATCH_TAG: u64 = 0x2B;

/// Mitigated and reference series of one Z-basis run.
#[derive(Debug, Clone)]
pub struct ZBasisRun {
    pub report: Report,
    pub sites: SiteSeries,
    pub reference: Reference,
}

fn observe(counts: &Counts, neel: &str, shots: Option<f64>) -> Result<Observation> {
    let z = counts.z_expectations()?;
    let l = z.len();
    let mut values = vec![
        zpi_density(&z),
        loschmidt_echo(counts, neel, 0)?,
        loschmidt_echo(counts, neel, 1)?,
        1.0,
    ];
    values.extend_from_slice(&z);
    let shot_std = match shots {
        None => vec![0.0; values.len()],
        Some(n) => {
            let var_z: Vec<f64> = z.iter().map(|x| (1.0 - x * x).max(0.0) / n).collect();
            let bern = |p: f64| (p * (1.0 - p)).max(0.0) / n;
            let mut s = vec![
                var_z.iter().sum::<f64>().sqrt() / l as f64,
                bern(values[1]).sqrt(),
                bern(values[2]).sqrt(),
                0.0,
            ];
            s.extend(var_z.iter().map(|v| v.sqrt()));
            s
        }
    };
    Ok(Observation { values, shot_std })
}

pub fn z_batch(cfg: &ExperimentConfig) -> Result<CircuitBatch> {
    let p = cfg.model_params()?;
    Ok(CircuitBatch {
        prep: neel_prep(cfg.sites, NeelVariant::Z2),
        step: build_trotter_step(&p, cfg.trotter_options())?,
        steps: cfg.steps,
        bases: vec![Circuit::new(cfg.sites)],
        tag: Z_BATCH_TAG,
    })
}

/// Per-step estimates of the observation vector and the batch manifest of
/// the first trial.
fn estimate(
    cfg: &ExperimentConfig,
) -> Result<(Vec<Vec<Estimate>>, Vec<crate::mitigation::BatchEntry>)> {
    let pipe = Pipeline::new(cfg)?;
    let batch = z_batch(cfg)?;
    let neel = NeelVariant::Z2.bitstring(cfg.sites);
    let mut per_trial = Vec::with_capacity(cfg.trials);
    let mut manifest = Vec::new();
    for trial in 0..cfg.trials {
        let (runs, entries) = pipe.run(&batch, trial)?;
        if trial == 0 {
            manifest = entries;
        }
        let variants: Vec<_> = runs.iter().map(|r| r.variant).collect();
        let mut steps = Vec::with_capacity(cfg.steps + 1);
        for n in 0..=cfg.steps {
            let obs: Vec<Option<Observation>> = runs
                .iter()
                .map(|r| {
                    let counts = &r.mitigated[n][0];
                    let fibonacci = counts.mean_of(|i| f64::from(u8::from(is_fibonacci(i))))?;
                    let (kept, fraction) = if cfg.postselect {
                        match postselect(counts) {
                            Ok(p) => (p.counts, p.retained_fraction),
                            Err(Error::EmptyPostselection) => return Ok(None),
                            Err(e) => return Err(e),
                        }
                    } else {
                        (counts.clone(), 1.0)
                    };
                    let shots =
                        (!cfg.infinite_shots).then(|| (cfg.shots as f64 * fraction).max(1.0));
                    let mut o = observe(&kept, &neel, shots)?;
                    o.values[3] = fibonacci;
                    Ok(Some(o))
                })
                .collect::<Result<_>>()?;
            steps.push(reduce(&variants, &obs, &cfg.zne_factors, cfg.zne_weighted));
        }
        per_trial.push(steps);
    }
    let combined = (0..=cfg.steps)
        .map(|n| {
            let t: Vec<Vec<Estimate>> = per_trial.iter().map(|p| p[n].clone()).collect();
            combine_trials(&t)
        })
        .collect();
    Ok((combined, manifest))
}

fn push_series(
    report: &mut Report,
    cfg: &ExperimentConfig,
    name: &str,
    est: &[Vec<Estimate>],
    k: usize,
) -> Result<()> {
    let mut s = TimeSeries::new(name);
    for (n, e) in est.iter().enumerate() {
        s.push_real(n, cfg.vt(n), e[k].value, e[k].std)?;
    }
    report.series.push(s);
    Ok(())
}

fn sites_of(cfg: &ExperimentConfig, est: &[Vec<Estimate>]) -> SiteSeries {
    let mut s = SiteSeries::default();
    for (n, e) in est.iter().enumerate() {
        let z = &e[HEAD..];
        s.push(
            n,
            cfg.vt(n),
            z.iter().map(|x| x.value).collect(),
            z.iter().map(|x| x.std).collect(),
        );
    }
    s
}

/// Runs the mitigation pipeline of `cfg` and, for comparison, the same
/// circuits with every mitigation stage off.
pub fn run_zbasis(cfg: &ExperimentConfig) -> Result<ZBasisRun> {
    cfg.validate()?;
    let reference = reference(cfg)?;
    let (est, manifest) = estimate(cfg)?;
    let raw_cfg = cfg.clone().unmitigated();
    let (raw, _) = estimate(&raw_cfg)?;

    let mut report = Report::new("zpi", cfg);
    report.batch = manifest;
    report.flagged_steps = est
        .iter()
        .enumerate()
        .filter(|(_, e)| e.iter().any(Estimate::is_missing))
        .map(|(n, _)| n)
        .collect();

    push_series(&mut report, cfg, "zpi_mitigated", &est, 0)?;
    push_series(&mut report, cfg, "zpi_unmitigated", &raw, 0)?;
    report.series.push(reference.zpi_ideal(cfg)?);
    report.series.push(reference.zpi_projected(cfg)?);
    push_series(&mut report, cfg, "fibonacci_weight_mitigated", &est, 3)?;
    push_series(&mut report, cfg, "fibonacci_weight_unmitigated", &raw, 3)?;
    report.series.push(reference.fibonacci_weight(cfg)?);

    let sites = sites_of(cfg, &est);
    let raw_sites = sites_of(cfg, &raw);
    let mitigated_ref = if cfg.postselect {
        &reference.projected
    } else {
        &reference.ideal
    };
    let mut d = accumulated_error(&sites, mitigated_ref)?;
    d.name = "accumulated_error_mitigated".into();
    let mut d_raw = accumulated_error(&raw_sites, &reference.ideal)?;
    d_raw.name = "accumulated_error_unmitigated".into();
    if let Some(p) = d.last() {
        report
            .summary
            .insert("accumulated_error_mitigated_final".into(), p.value_re);
    }
    if let Some(p) = d_raw.last() {
        report
            .summary
            .insert("accumulated_error_unmitigated_final".into(), p.value_re);
    }
    report.series.push(d);
    report.series.push(d_raw);

    for q in 0..cfg.sites {
        for (tag, s) in [("mitigated", &sites), ("unmitigated", &raw_sites)] {
            let mut ts = TimeSeries::new(format!("z_site{:02}_{tag}", q + 1));
            for k in 0..s.len() {
                ts.push_real(s.steps[k], s.vt[k], s.values[k][q], s.std[k][q])?;
            }
            report.series.push(ts);
        }
    }

    for f in 0..2 {
        push_series(
            &mut report,
            cfg,
            &format!("loschmidt_f{f}_mitigated"),
            &est,
            1 + f,
        )?;
        push_series(
            &mut report,
            cfg,
            &format!("loschmidt_f{f}_unmitigated"),
            &raw,
            1 + f,
        )?;
        report.series.push(reference.loschmidt(cfg, f, false)?);
        report.series.push(reference.loschmidt(cfg, f, true)?);
    }
    Ok(ZBasisRun {
        report,
        sites,
        reference,
    })
}

/// Magnetization, per-site and accumulated-error series.
pub fn run_zpi(cfg: &ExperimentConfig) -> Result<Report> {
    let mut r = run_zbasis(cfg)?.report;
    r.retain_series(|s| !s.name.starts_with("loschmidt"));
    Ok(r)
}

/// Loschmidt echo series for zero and one allowed flips.
pub fn run_loschmidt(cfg: &ExperimentConfig) -> Result<Report> {
    let mut r = run_zbasis(cfg)?.report;
    r.command = "loschmidt".into();
    r.retain_series(|s| s.name.starts_with("loschmidt"));
    r.summary.clear();
    Ok(r)
}
