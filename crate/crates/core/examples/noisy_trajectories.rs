//! Pauli-noise trajectories against exact density-matrix evolution on three
//! qubits.

use scarsim::model::{build_trotter_step, neel_prep, ModelParams, NeelVariant, TrotterOptions};
use scarsim::noise::{run_density, run_trajectories, NoiseSpec, TrajectoryOptions};
use scarsim::observables::staggered_magnetization;
use scarsim::qsim::{Counts, DensityOperator, Shots, Statevector};

fn main() -> scarsim::Result<()> {
    let l = 3;
    let p = ModelParams::scar(l);
    let step = build_trotter_step(&p, TrotterOptions::default())?;
    let mut blocks = vec![neel_prep(l, NeelVariant::Z2)];
    blocks.extend(std::iter::repeat_n(step, 6));
    let model = NoiseSpec::depolarizing(0.05).compile()?;

    let opts = TrajectoryOptions {
        trajectories: 20_000,
        shots: Shots::Infinite(1),
        seed: 1,
    };
    let sampled = run_trajectories(&Statevector::zero(l), &blocks, &model, &opts)?;
    let exact = run_density(
        &DensityOperator::pure(&Statevector::zero(l))?,
        &blocks,
        &model,
        &[0.0; 3],
    )?;

    for (n, (c, rho)) in sampled.iter().zip(&exact).enumerate() {
        let from_rho = Counts::from_probabilities(l, &rho.diagonal(), 1);
        println!(
            "step {n}: trajectories {:+.4}  density {:+.4}",
            staggered_magnetization(c)?,
            staggered_magnetization(&from_rho)?
        );
    }
    Ok(())
}
