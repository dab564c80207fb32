//! Size of the constrained subspace and how much of the ideal Trotter state
//! stays inside it.

use scarsim::experiments::{reference, ExperimentConfig};
use scarsim::model::fibonacci_projector;

fn main() -> scarsim::Result<()> {
    for l in [4, 8, 12, 16, 20] {
        let mask = fibonacci_projector(l)?;
        println!(
            "L = {l:>2}: {:>6} of {:>8} basis states",
            mask.dimension(),
            1usize << l
        );
    }

    let cfg = ExperimentConfig {
        sites: 12,
        steps: 39,
        ..Default::default()
    };
    let w = reference(&cfg)?.fibonacci_weight;
    let avg = w.iter().sum::<f64>() / w.len() as f64;
    println!("time-averaged subspace weight at L = 12: {avg:.3}");
    println!("minimum: {:.3}", w.iter().copied().fold(1.0, f64::min));
    Ok(())
}
