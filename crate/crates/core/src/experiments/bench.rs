//! `R_ZZ(θ)` benchmark across compilations: pulse duration, modeled error
//! rate and the fidelity slope from folded process tomography.

use super::config::ExperimentConfig;
use super::emit::{Report, Table};
use crate::model::{rzz_gates, RzzImpl};
use crate::noise::rzz_duration;
use crate::qsim::Circuit;
use crate::tomography::spam_free_error;
use crate::{seed, Result};

pub const BENCH_SCALE_FACTORS: [u32; 3] = [1, 3, 5];
const BENCH_TAG: u64 = 0xBE;

/// `n` evenly spaced angles on `[0.2, 2.4]`.
pub fn bench_angles(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.2],
        _ => (0..n)
            .map(|k| 0.2 + 2.2 * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// One row per `(θ, compilation)`; the compilations are two-CNOT and
/// scaled `R_ZX`.
pub fn run_rzz_bench(cfg: &ExperimentConfig, thetas: &[f64]) -> Result<Report> {
    cfg.validate()?;
    let spec = cfg.noise_spec()?;
    let model = spec.compile()?;
    let shots = cfg.shots();
    let repeats = if shots.is_infinite() { 1 } else { 4 };
    let mut table = Table::new(
        "rzz_bench",
        &[
            "theta",
            "impl",
            "duration_ns",
            "error_rate",
            "slope",
            "slope_std",
            "f0",
            "f0_std",
        ],
    );
    for (k, &theta) in thetas.iter().enumerate() {
        for imp in [RzzImpl::TwoCnot, RzzImpl::ScaledRzx] {
            let gate = Circuit::from_gates(2, rzz_gates(0, 1, theta, imp))?;
            let s = seed::derive(cfg.seed, &[BENCH_TAG, k as u64, imp as u64]);
            let fit = spam_free_error(&gate, &model, &BENCH_SCALE_FACTORS, repeats, shots, s)?;
            table.push(vec![
                format!("{theta:.6}"),
                imp.name().into(),
                format!("{:.6}", rzz_duration(theta, imp, &spec.pulse)),
                format!("{:.9e}", model.rzz_error_rate(theta, imp)),
                format!("{:.9e}", fit.epsilon),
                format!("{:.9e}", fit.epsilon_std),
                format!("{:.9}", fit.f0),
                format!("{:.9e}", fit.f0_std),
            ]);
        }
    }
    let mut report = Report::new("rzz-bench", cfg);
    report.tables.push(table);
    Ok(report)
}
