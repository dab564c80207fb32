//! Process tomography of a single two-qubit `R_ZZ(θ)` under the noise
//! preset, with the folding-slope estimate alongside.

use super::config::ExperimentConfig;
use super::emit::{Report, Table};
use crate::model::rzz_gates;
use crate::qsim::Circuit;
use crate::tomography::{qpt_reconstruct, spam_free_error, SlopeReport};
use crate::{seed, Result};

use super::bench::BENCH_SCALE_FACTORS;

const QPT_TAG: u64 = 0x9B7;

/// Tomography of `R_ZZ(θ)` in `cfg`'s compilation; `θ` defaults to the
/// Trotter bond angle `2 V dt`.
pub fn run_qpt(cfg: &ExperimentConfig, theta: Option<f64>) -> Result<Report> {
    cfg.validate()?;
    let theta = theta.unwrap_or(2.0 * cfg.v * cfg.dt);
    let model = cfg.noise_spec()?.compile()?;
    let shots = cfg.shots();
    let gate = Circuit::from_gates(2, rzz_gates(0, 1, theta, cfg.rzz_impl))?;
    let qpt = qpt_reconstruct(&gate, &model, shots, seed::derive(cfg.seed, &[QPT_TAG, 0]))?;
    let repeats = if shots.is_infinite() { 1 } else { 4 };
    let slope = spam_free_error(
        &gate,
        &model,
        &BENCH_SCALE_FACTORS,
        repeats,
        shots,
        seed::derive(cfg.seed, &[QPT_TAG, 1]),
    )?;
    let slope = SlopeReport::new(slope, shots);

    let mut report = Report::new("qpt", cfg);
    let mut ptm = Table::new(
        "ptm",
        &[
            "row", "c00", "c01", "c02", "c03", "c10", "c11", "c12", "c13", "c20", "c21", "c22",
            "c23", "c30", "c31", "c32", "c33",
        ],
    );
    for (r, row) in qpt.ptm.iter().enumerate() {
        let mut cells = vec![r.to_string()];
        cells.extend(row.iter().map(|x| format!("{x:.12e}")));
        ptm.push(cells);
    }
    report.tables.push(ptm);
    let mut points = Table::new("fidelity_points", &["lambda", "repeat", "average_fidelity"]);
    for p in &slope.result.points {
        points.push(vec![
            p.lambda.to_string(),
            p.repeat.to_string(),
            format!("{:.12}", p.fidelity),
        ]);
    }
    report.tables.push(points);
    let s = &mut report.summary;
    s.insert("theta".into(), theta);
    s.insert("process_fidelity".into(), qpt.process_fidelity);
    s.insert("average_fidelity".into(), qpt.average_fidelity);
    s.insert("condition_number".into(), qpt.condition_number);
    s.insert("min_choi_eigenvalue".into(), qpt.min_choi_eigenvalue);
    s.insert(
        "completely_positive".into(),
        f64::from(u8::from(qpt.completely_positive)),
    );
    s.insert("slope_epsilon".into(), slope.result.epsilon);
    s.insert("slope_epsilon_std".into(), slope.result.epsilon_std);
    s.insert("slope_f0".into(), slope.result.f0);
    Ok(report)
}
