//! First-order Trotter error against exact evolution.

use scarsim::model::{exact_evolve, trotter_circuit, ModelParams, NeelVariant, TrotterOptions};
use scarsim::qsim::{run_circuit, Statevector};

fn main() -> scarsim::Result<()> {
    let (sites, t) = (8, 4.0);
    let mut last = None;
    for dt in [0.4, 0.2, 0.1, 0.05, 0.025] {
        let p = ModelParams::new(1.0, 0.24, dt, sites)?;
        let steps = (t / dt).round() as usize;
        let c = trotter_circuit(&p, TrotterOptions::default(), steps, NeelVariant::Z2)?;
        let trotter = run_circuit(&Statevector::zero(sites), &c)?;
        let exact = exact_evolve(&p, t)?;
        let err = trotter
            .amplitudes()
            .iter()
            .zip(exact.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        match last {
            Some(prev) => println!("dt = {dt:<6} error {err:.3e}  ratio {:.2}", prev / err),
            None => println!("dt = {dt:<6} error {err:.3e}"),
        }
        last = Some(err);
    }
    Ok(())
}
