//! Duration and modeled error of R_ZZ(θ) for the two compilations.

use scarsim::model::RzzImpl;
use scarsim::noise::{rzz_duration, threshold, NoiseSpec};

fn main() -> scarsim::Result<()> {
    let spec = NoiseSpec::casablanca_like();
    let model = spec.compile()?;
    println!(
        "scaled pulse reaches full amplitude at θ = {:.3}",
        threshold(&spec.pulse)
    );
    println!(
        "{:>6} {:>12} {:>12} {:>10} {:>10}",
        "θ", "2cnot ns", "rzx ns", "2cnot p", "rzx p"
    );
    for k in 0..12 {
        let theta = 0.2 + 0.2 * k as f64;
        println!(
            "{theta:>6.2} {:>12.1} {:>12.1} {:>10.4} {:>10.4}",
            rzz_duration(theta, RzzImpl::TwoCnot, &spec.pulse),
            rzz_duration(theta, RzzImpl::ScaledRzx, &spec.pulse),
            model.rzz_error_rate(theta, RzzImpl::TwoCnot),
            model.rzz_error_rate(theta, RzzImpl::ScaledRzx),
        );
    }
    Ok(())
}
