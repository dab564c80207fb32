//! Noiseless references: ideal Trotter, Fibonacci-projected ideal Trotter and
//! exact evolution.

use super::config::ExperimentConfig;
use super::emit::Report;
use crate::model::{
    build_trotter_step, fibonacci_projector, neel_state, project, ExactPropagator, NeelVariant,
};
use crate::observables::{
    cy_oracle, loschmidt_echo_state, staggered_magnetization_state, SiteSeries, TimeSeries,
};
use crate::qsim::Statevector;
use crate::Result;

/// Largest chain for which `oracle` also runs exact diagonalization.
pub const MAX_EXACT_SITES: usize = 12;

/// Per-step ideal and projected observables from `|Z2⟩`.
#[derive(Debug, Clone)]
pub struct Reference {
    pub ideal: SiteSeries,
    pub projected: SiteSeries,
    /// Weight of the ideal state inside the Fibonacci subspace.
    pub fibonacci_weight: Vec<f64>,
    /// `loschmidt[f]`: ideal echo with up to `f` flips.
    pub loschmidt_ideal: [Vec<f64>; 2],
    pub loschmidt_projected: [Vec<f64>; 2],
}

fn site_z(state: &Statevector) -> Vec<f64> {
    let l = state.width();
    let mut z = vec![0.0; l];
    for (i, p) in state.probabilities().iter().enumerate() {
        for (q, zq) in z.iter_mut().enumerate() {
            *zq += if i >> (l - 1 - q) & 1 == 0 { *p } else { -*p };
        }
    }
    z
}

pub fn reference(cfg: &ExperimentConfig) -> Result<Reference> {
    let p = cfg.model_params()?;
    let step = build_trotter_step(&p, cfg.trotter_options())?;
    let mask = fibonacci_projector(cfg.sites)?;
    let neel = NeelVariant::Z2.bitstring(cfg.sites);
    let mut state = neel_state(cfg.sites, NeelVariant::Z2);
    let mut out = Reference {
        ideal: SiteSeries::default(),
        projected: SiteSeries::default(),
        fibonacci_weight: Vec::new(),
        loschmidt_ideal: [Vec::new(), Vec::new()],
        loschmidt_projected: [Vec::new(), Vec::new()],
    };
    let zeros = vec![0.0; cfg.sites];
    for n in 0..=cfg.steps {
        if n > 0 {
            state.run(&step)?;
        }
        let vt = cfg.vt(n);
        out.ideal.push(n, vt, site_z(&state), zeros.clone());
        let proj = project(&state, &mask)?;
        out.fibonacci_weight.push(proj.weight);
        let projected = proj.state.unwrap_or_else(|| state.clone());
        out.projected.push(n, vt, site_z(&projected), zeros.clone());
        for f in 0..2 {
            out.loschmidt_ideal[f].push(loschmidt_echo_state(&state, &neel, f as u32)?);
            out.loschmidt_projected[f].push(loschmidt_echo_state(&projected, &neel, f as u32)?);
        }
    }
    Ok(out)
}

/// `Σ_i (−1)^i z_i / L`.
pub fn zpi_density(z: &[f64]) -> f64 {
    crate::observables::staggered_from_sites(z) / z.len() as f64
}

fn series_from(
    name: &str,
    cfg: &ExperimentConfig,
    values: impl IntoIterator<Item = f64>,
) -> Result<TimeSeries> {
    let mut s = TimeSeries::new(name);
    for (n, v) in values.into_iter().enumerate() {
        s.push_real(n, cfg.vt(n), v, 0.0)?;
    }
    Ok(s)
}

impl Reference {
    pub fn zpi_ideal(&self, cfg: &ExperimentConfig) -> Result<TimeSeries> {
        series_from(
            "zpi_ideal",
            cfg,
            self.ideal.values.iter().map(|z| zpi_density(z)),
        )
    }

    pub fn zpi_projected(&self, cfg: &ExperimentConfig) -> Result<TimeSeries> {
        series_from(
            "zpi_projected",
            cfg,
            self.projected.values.iter().map(|z| zpi_density(z)),
        )
    }

    pub fn fibonacci_weight(&self, cfg: &ExperimentConfig) -> Result<TimeSeries> {
        series_from(
            "fibonacci_weight_ideal",
            cfg,
            self.fibonacci_weight.iter().copied(),
        )
    }

    pub fn loschmidt(
        &self,
        cfg: &ExperimentConfig,
        flips: usize,
        projected: bool,
    ) -> Result<TimeSeries> {
        let (kind, v) = if projected {
            ("projected", &self.loschmidt_projected[flips])
        } else {
            ("ideal", &self.loschmidt_ideal[flips])
        };
        series_from(
            &format!("loschmidt_f{flips}_{kind}"),
            cfg,
            v.iter().copied(),
        )
    }
}

/// Dumps every noiseless reference for `cfg`.
pub fn run_oracle(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let r = reference(cfg)?;
    let mut report = Report::new("oracle", cfg);
    report.series.push(r.zpi_ideal(cfg)?);
    report.series.push(r.zpi_projected(cfg)?);
    report.series.push(r.fibonacci_weight(cfg)?);
    for f in 0..2 {
        report.series.push(r.loschmidt(cfg, f, false)?);
        report.series.push(r.loschmidt(cfg, f, true)?);
    }
    let p = cfg.model_params()?;
    if cfg.sites <= MAX_EXACT_SITES {
        let prop = ExactPropagator::new(&p)?;
        let initial = neel_state(cfg.sites, NeelVariant::Z2);
        let mut exact = TimeSeries::new("zpi_exact");
        for n in 0..=cfg.steps {
            let s = prop.evolve(&initial, n as f64 * cfg.dt)?;
            exact.push_real(
                n,
                cfg.vt(n),
                staggered_magnetization_state(&s) / cfg.sites as f64,
                0.0,
            )?;
        }
        report.series.push(exact);
    }
    let cy = cy_oracle(&p, cfg.trotter_options(), cfg.steps)?;
    let mut s = TimeSeries::new("cy_oracle");
    for (n, v) in cy.iter().enumerate() {
        s.push(n, cfg.vt(n), *v, 0.0)?;
    }
    report.series.push(s);
    report.series.push(series_from(
        "cy_oracle_abs",
        cfg,
        cy.iter().map(|c| c.norm()),
    )?);
    Ok(report)
}
