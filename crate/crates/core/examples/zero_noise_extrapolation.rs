//! Random gate folding at λ ∈ {1, 1.5, 2} and a linear fit back to λ = 0,
//! using exact density-matrix expectation values.

use scarsim::mitigation::{fold_gates_random, zne_from_samples};
use scarsim::model::{trotter_circuit, ModelParams, NeelVariant, TrotterOptions};
use scarsim::noise::{run_density, NoiseSpec};
use scarsim::observables::{staggered_magnetization, staggered_magnetization_state};
use scarsim::qsim::{run_circuit, Counts, DensityOperator, Statevector};

fn main() -> scarsim::Result<()> {
    let l = 4;
    let p = ModelParams::scar(l);
    let circuit = trotter_circuit(&p, TrotterOptions::default(), 4, NeelVariant::Z2)?;
    let model = NoiseSpec::depolarizing(0.01).compile()?;
    let initial = DensityOperator::pure(&Statevector::zero(l))?;

    let mut groups = Vec::new();
    for lambda in [1.0, 1.5, 2.0] {
        let values = (0..10)
            .map(|seed| {
                let folded = fold_gates_random(&circuit, lambda, seed)?;
                let rho = run_density(&initial, &[folded], &model, &[0.0; 4])?
                    .pop()
                    .expect("one block");
                staggered_magnetization(&Counts::from_probabilities(l, &rho.diagonal(), 1))
            })
            .collect::<scarsim::Result<Vec<f64>>>()?;
        println!(
            "λ = {lambda}: mean Zpi = {:+.5}",
            values.iter().sum::<f64>() / values.len() as f64
        );
        groups.push((lambda, values));
    }
    let fit = zne_from_samples(&groups, true)?;
    let ideal = staggered_magnetization_state(&run_circuit(&Statevector::zero(l), &circuit)?);
    println!(
        "extrapolated {:+.5} ± {:.5}, noiseless {ideal:+.5}",
        fit.intercept,
        fit.intercept_std()
    );
    Ok(())
}
