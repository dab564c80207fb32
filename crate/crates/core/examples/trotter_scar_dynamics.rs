//! Ideal Trotter evolution of |Z2> in the scar regime: staggered
//! magnetization, Loschmidt echo and the dominant oscillation frequency.

use scarsim::experiments::{oracle::zpi_density, reference, ExperimentConfig};
use scarsim::observables::{dominant_frequency, first_revival, period};

fn main() -> scarsim::Result<()> {
    let cfg = ExperimentConfig {
        sites: 12,
        steps: 39,
        ..Default::default()
    };
    let r = reference(&cfg)?;
    let zpi: Vec<f64> = r.ideal.values.iter().map(|z| zpi_density(z)).collect();

    println!(
        "{:>4} {:>10} {:>10} {:>10}",
        "Vt", "Zpi/L", "echo", "echo(P)"
    );
    for (n, z) in zpi.iter().enumerate() {
        println!(
            "{:>4} {:>10.4} {:>10.4} {:>10.4}",
            r.ideal.vt[n], z, r.loschmidt_ideal[0][n], r.loschmidt_projected[0][n]
        );
    }

    let omega = dominant_frequency(&r.ideal.vt, &zpi, 0.05, 1.5, 4000);
    println!(
        "dominant frequency {omega:.4} (1.33 Omega = {:.4}), period {:.2}",
        1.33 * cfg.omega,
        period(omega)
    );
    if let Some(step) = first_revival(&r.loschmidt_projected[0], 0.5) {
        println!("first projected revival at step {step}");
    }
    Ok(())
}
