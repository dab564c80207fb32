//! Circuit-batch orchestration shared by all experiments.
//!
//! A batch is a preparation block plus `steps` copies of one Trotter step,
//! measured after every block in one or more bases. For each scale factor
//! and twirl instance every step block is folded, twirled, scheduled and
//! optionally decoupled on its own, so prefix circuits stay consistent: the
//! counts after block `n` are those of the `n`-step circuit. Fold counts are
//! spread over blocks so each prefix carries exactly the folds its own
//! two-qubit count calls for.
//!
//! Post-processing order is fixed: readout error → readout mitigation →
//! (postselection and estimation in the caller) → ZNE across scale factors.

use crate::fit::{mean, sample_std};
use crate::mitigation::{
    calibrate_confusion, fold_gates_count, insert_dd, prefix_fold_counts, twirl_circuit,
    zne_from_samples, BatchEntry, ReadoutMitigator,
};
use crate::noise::{
    apply_readout_error, run_trajectories_in_bases, schedule_idles, ConfusionMatrix,
    ConfusionMethod, NoiseModel, NoiseSpec, TrajectoryOptions,
};
use crate::qsim::{Circuit, Counts, Statevector};
use crate::{seed, Result};
use rayon::prelude::*;

use super::config::ExperimentConfig;

const FOLD_TAG: u64 = 0xF01D;
const TWIRL_TAG: u64 = 0x7217;
const RUN_TAG: u64 = 0x2A11;
const READOUT_TAG: u64 = 0x2EAD;
const CALIBRATION_TAG: u64 = 0xCA1B;

/// Circuits of one experiment setting.
#[derive(Debug, Clone)]
pub struct CircuitBatch {
    pub prep: Circuit,
    pub step: Circuit,
    pub steps: usize,
    pub bases: Vec<Circuit>,
    /// Distinguishes settings sharing one configuration seed.
    pub tag: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variant {
    pub lambda: f64,
    pub lambda_index: usize,
    pub twirl: usize,
}

/// Counts of one variant, indexed `[step][basis]`.
#[derive(Debug, Clone)]
pub struct VariantRun {
    pub variant: Variant,
    /// As measured, with readout error.
    pub raw: Vec<Vec<Counts>>,
    /// After readout mitigation, or a copy of `raw` when mitigation is off.
    pub mitigated: Vec<Vec<Counts>>,
}

pub struct Pipeline {
    pub config: ExperimentConfig,
    pub spec: NoiseSpec,
    pub model: NoiseModel,
    forward: ConfusionMatrix,
    mitigator: Option<ReadoutMitigator>,
}

impl Pipeline {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let spec = config.noise_spec()?;
        let model = spec.compile()?;
        let forward = ConfusionMatrix::from_spec(&spec, config.sites, ConfusionMethod::Tensor)?;
        let mitigator = match config.readout_mode.method() {
            None => None,
            Some(method) => {
                let m = calibrate_confusion(
                    &spec,
                    config.sites,
                    config.calibration_shots(),
                    method,
                    seed::derive(config.seed, &[CALIBRATION_TAG]),
                )?;
                Some(ReadoutMitigator::new(&m)?)
            }
        };
        Ok(Self {
            config: config.clone(),
            spec,
            model,
            forward,
            mitigator,
        })
    }

    pub fn variants(&self) -> Vec<Variant> {
        let mut out = Vec::new();
        for (lambda_index, &lambda) in self.config.zne_factors.iter().enumerate() {
            for twirl in 0..self.config.instances() {
                out.push(Variant {
                    lambda,
                    lambda_index,
                    twirl,
                });
            }
        }
        out
    }

    fn variant_tags(&self, batch: &CircuitBatch, v: &Variant, trial: usize) -> [u64; 4] {
        [
            batch.tag,
            trial as u64,
            v.lambda_index as u64,
            v.twirl as u64,
        ]
    }

    /// Blocks executed for one variant, plus their manifest entries.
    pub fn build_blocks(
        &self,
        batch: &CircuitBatch,
        v: &Variant,
        trial: usize,
    ) -> Result<(Vec<Circuit>, Vec<BatchEntry>)> {
        let tags = self.variant_tags(batch, v, trial);
        let per_block = vec![batch.step.two_qubit_count(); batch.steps];
        let folds = prefix_fold_counts(&per_block, v.lambda)?;
        let idle_noise = self.spec.idle.detuning_std > 0.0 || self.spec.idle.dephasing_rate > 0.0;
        let mut blocks = vec![batch.prep.clone()];
        let mut entries = vec![BatchEntry {
            step: 0,
            lambda: v.lambda,
            twirl: v.twirl,
            fold_seed: 0,
            twirl_seed: 0,
            folded_gates: 0,
            two_qubit_gates: batch.prep.two_qubit_count(),
        }];
        let mut cumulative_2q = batch.prep.two_qubit_count();
        for (n, &k) in folds.iter().enumerate() {
            let step_tags = [tags[0], tags[1], tags[2], tags[3], n as u64 + 1];
            let fold_seed = seed::derive(self.config.seed, &[&[FOLD_TAG][..], &step_tags].concat());
            let twirl_seed =
                seed::derive(self.config.seed, &[&[TWIRL_TAG][..], &step_tags].concat());
            let mut c = fold_gates_count(&batch.step, k, fold_seed)?;
            if self.config.twirls > 0 {
                c = twirl_circuit(&c, twirl_seed)?;
            }
            if idle_noise || self.config.dd {
                c = schedule_idles(&c, &self.model)?;
            }
            if self.config.dd {
                c = insert_dd(&c, self.spec.pulse.single_qubit_ns)?;
            }
            cumulative_2q += c.two_qubit_count();
            entries.push(BatchEntry {
                step: n + 1,
                lambda: v.lambda,
                twirl: v.twirl,
                fold_seed,
                twirl_seed: if self.config.twirls > 0 {
                    twirl_seed
                } else {
                    0
                },
                folded_gates: entries.last().map_or(0, |e| e.folded_gates) + k,
                two_qubit_gates: cumulative_2q,
            });
            blocks.push(c);
        }
        Ok((blocks, entries))
    }

    /// Executes every variant of `batch` for one trial.
    pub fn run(
        &self,
        batch: &CircuitBatch,
        trial: usize,
    ) -> Result<(Vec<VariantRun>, Vec<BatchEntry>)> {
        let width = self.config.sites;
        let results: Vec<(VariantRun, Vec<BatchEntry>)> = self
            .variants()
            .into_par_iter()
            .map(|v| self.run_variant(batch, v, trial, width))
            .collect::<Result<_>>()?;
        let mut runs = Vec::with_capacity(results.len());
        let mut manifest = Vec::new();
        for (r, e) in results {
            runs.push(r);
            manifest.extend(e);
        }
        Ok((runs, manifest))
    }

    fn run_variant(
        &self,
        batch: &CircuitBatch,
        v: Variant,
        trial: usize,
        width: usize,
    ) -> Result<(VariantRun, Vec<BatchEntry>)> {
        {
            let tags = self.variant_tags(batch, &v, trial);
            let (blocks, entries) = self.build_blocks(batch, &v, trial)?;
            let opts = TrajectoryOptions {
                trajectories: self.config.trajectories,
                shots: self.config.shots(),
                seed: seed::derive(self.config.seed, &[&[RUN_TAG][..], &tags].concat()),
            };
            let ideal = run_trajectories_in_bases(
                &Statevector::zero(width),
                &blocks,
                &batch.bases,
                &self.model,
                &opts,
            )?;
            let mut raw = Vec::with_capacity(ideal.len());
            let mut mitigated = Vec::with_capacity(ideal.len());
            for (n, per_basis) in ideal.into_iter().enumerate() {
                let mut r_row = Vec::with_capacity(per_basis.len());
                let mut m_row = Vec::with_capacity(per_basis.len());
                for (b, counts) in per_basis.into_iter().enumerate() {
                    let readout_seed = (!self.config.infinite_shots).then(|| {
                        seed::derive(
                            self.config.seed,
                            &[&[READOUT_TAG][..], &tags, &[n as u64, b as u64]].concat(),
                        )
                    });
                    let noisy = apply_readout_error(&counts, &self.forward, readout_seed)?;
                    let fixed = match &self.mitigator {
                        Some(m) => m.apply(&noisy)?,
                        None => noisy.clone(),
                    };
                    r_row.push(noisy);
                    m_row.push(fixed);
                }
                raw.push(r_row);
                mitigated.push(m_row);
            }
            Ok((
                VariantRun {
                    variant: v,
                    raw,
                    mitigated,
                },
                entries,
            ))
        }
    }
}

/// Estimate and its standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std: f64,
}

impl Estimate {
    pub const MISSING: Estimate = Estimate {
        value: f64::NAN,
        std: f64::NAN,
    };

    pub fn is_missing(&self) -> bool {
        self.value.is_nan()
    }
}

/// Mean and standard error over samples.
pub fn mean_estimate(samples: &[f64]) -> Estimate {
    if samples.is_empty() {
        return Estimate::MISSING;
    }
    Estimate {
        value: mean(samples),
        std: sample_std(samples) / (samples.len() as f64).sqrt(),
    }
}

/// Observable vector estimated from one variant, with its shot-noise std.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub values: Vec<f64>,
    pub shot_std: Vec<f64>,
}

/// Reduces per-variant observations to one estimate per component: linear
/// ZNE when at least two scale factors have data, otherwise the mean over
/// twirl instances. A lone sample keeps its shot-noise std. `None` entries
/// (e.g. empty postselection) are skipped.
pub fn reduce(
    variants: &[Variant],
    obs: &[Option<Observation>],
    lambdas: &[f64],
    weighted: bool,
) -> Vec<Estimate> {
    let len = obs
        .iter()
        .flatten()
        .map(|o| o.values.len())
        .next()
        .unwrap_or(0);
    (0..len)
        .map(|c| {
            let groups: Vec<(f64, Vec<f64>)> = lambdas
                .iter()
                .enumerate()
                .map(|(li, &l)| {
                    let samples = variants
                        .iter()
                        .zip(obs)
                        .filter(|(v, _)| v.lambda_index == li)
                        .filter_map(|(_, x)| x.as_ref().map(|x| x.values[c]))
                        .collect();
                    (l, samples)
                })
                .filter(|(_, s): &(f64, Vec<f64>)| !s.is_empty())
                .collect();
            match groups.len() {
                0 => Estimate::MISSING,
                1 if groups[0].1.len() == 1 => Estimate {
                    value: groups[0].1[0],
                    std: obs.iter().flatten().next().map_or(0.0, |o| o.shot_std[c]),
                },
                1 => mean_estimate(&groups[0].1),
                _ => match zne_from_samples(&groups, weighted) {
                    Ok(r) => Estimate {
                        value: r.intercept,
                        std: r.intercept_std(),
                    },
                    Err(_) => Estimate::MISSING,
                },
            }
        })
        .collect()
}

/// Combines per-trial estimates: mean over trials, with the sample std across
/// trials when there are several.
pub fn combine_trials(per_trial: &[Vec<Estimate>]) -> Vec<Estimate> {
    let len = per_trial.first().map_or(0, Vec::len);
    (0..len)
        .map(|c| {
            let vals: Vec<f64> = per_trial
                .iter()
                .map(|t| t[c].value)
                .filter(|v| !v.is_nan())
                .collect();
            match (per_trial.len(), vals.len()) {
                (_, 0) => Estimate::MISSING,
                (1, _) => per_trial[0][c],
                _ => Estimate {
                    value: mean(&vals),
                    std: sample_std(&vals),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mitigation::ReadoutMode;
    use crate::model::{build_trotter_step, neel_prep, NeelVariant};

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            sites: 4,
            steps: 3,
            shots: 1000,
            trajectories: 8,
            twirls: 2,
            noise_preset: "casablanca-like".into(),
            ..Default::default()
        }
    }

    fn batch(cfg: &ExperimentConfig) -> CircuitBatch {
        let p = cfg.model_params().unwrap();
        CircuitBatch {
            prep: neel_prep(cfg.sites, NeelVariant::Z2),
            step: build_trotter_step(&p, cfg.trotter_options()).unwrap(),
            steps: cfg.steps,
            bases: vec![Circuit::new(cfg.sites)],
            tag: 0,
        }
    }

    #[test]
    fn batch_shape_and_manifest() {
        let cfg = small_config();
        let pipe = Pipeline::new(&cfg).unwrap();
        let (runs, manifest) = pipe.run(&batch(&cfg), 0).unwrap();
        assert_eq!(runs.len(), 6);
        assert_eq!(manifest.len(), 6 * 4);
        for r in &runs {
            assert_eq!(r.raw.len(), 4);
            assert_eq!(r.raw[0].len(), 1);
            assert_eq!(r.raw[3][0].total(), 1000.0);
        }
        // λ = 2 over 3 steps of 3 gates: cumulative folds 2, 3, 5.
        let folded: Vec<usize> = manifest
            .iter()
            .filter(|e| e.lambda == 2.0 && e.twirl == 0)
            .map(|e| e.folded_gates)
            .collect();
        assert_eq!(folded, vec![0, 2, 3, 5]);
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = small_config();
        let a = Pipeline::new(&cfg).unwrap().run(&batch(&cfg), 0).unwrap().0;
        let b = Pipeline::new(&cfg).unwrap().run(&batch(&cfg), 0).unwrap().0;
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.raw, y.raw);
            assert_eq!(x.mitigated, y.mitigated);
        }
    }

    #[test]
    fn noiseless_pipeline_is_exact() {
        let cfg = ExperimentConfig {
            noise_preset: "noiseless".into(),
            infinite_shots: true,
            dd: true,
            readout_mode: ReadoutMode::Full,
            ..small_config()
        };
        let pipe = Pipeline::new(&cfg).unwrap();
        let (runs, _) = pipe.run(&batch(&cfg), 0).unwrap();
        let p = cfg.model_params().unwrap();
        let step = build_trotter_step(&p, cfg.trotter_options()).unwrap();
        let mut s = crate::model::neel_state(4, NeelVariant::Z2);
        for n in 0..=3 {
            if n > 0 {
                s.run(&step).unwrap();
            }
            let probs = s.probabilities();
            for r in &runs {
                for (i, p) in probs.iter().enumerate() {
                    assert!((r.mitigated[n][0].get(i) / 1000.0 - p).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn reduce_extrapolates_lines() {
        let variants: Vec<Variant> = [(1.0, 0), (1.0, 0), (2.0, 1), (2.0, 1)]
            .iter()
            .enumerate()
            .map(|(k, &(lambda, lambda_index))| Variant {
                lambda,
                lambda_index,
                twirl: k % 2,
            })
            .collect();
        let o = |x: f64| {
            Some(Observation {
                values: vec![x],
                shot_std: vec![0.01],
            })
        };
        let values = vec![o(0.9), o(0.9), o(0.8), None];
        let est = reduce(&variants, &values, &[1.0, 2.0], true);
        assert!((est[0].value - 1.0).abs() < 1e-12);
        let only_one = reduce(&variants[..2], &values[..2], &[1.0], true);
        assert!((only_one[0].value - 0.9).abs() < 1e-12);
        let lone = reduce(&variants[..1], &values[..1], &[1.0], true);
        assert_eq!(
            lone[0],
            Estimate {
                value: 0.9,
                std: 0.01
            }
        );
    }

    #[test]
    fn trial_combination() {
        let t = vec![
            vec![Estimate {
                value: 1.0,
                std: 0.1,
            }],
            vec![Estimate {
                value: 3.0,
                std: 0.1,
            }],
        ];
        let c = combine_trials(&t);
        assert_eq!(c[0].value, 2.0);
        assert!((c[0].std - 2f64.sqrt()).abs() < 1e-12);
    }
}
