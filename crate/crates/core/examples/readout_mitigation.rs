//! Calibrate a confusion matrix from basis-state preparations, then invert
//! it on noisy counts.

use scarsim::mitigation::{calibrate_confusion, ReadoutMitigator};
use scarsim::noise::{apply_readout_error, ConfusionMatrix, ConfusionMethod, NoiseSpec};
use scarsim::observables::staggered_magnetization;
use scarsim::qsim::{Counts, Shots};

fn main() -> scarsim::Result<()> {
    let l = 6;
    let spec = NoiseSpec::casablanca_like();
    let truth = ConfusionMatrix::from_spec(&spec, l, ConfusionMethod::Tensor)?;

    let ideal = Counts::from_bitstrings([("010101", 6000), ("010100", 1500), ("000101", 692)])?;
    let noisy = apply_readout_error(&ideal, &truth, Some(3))?;

    for (label, method) in [
        ("tensor", ConfusionMethod::Tensor),
        ("full", ConfusionMethod::Full),
    ] {
        let calibrated = calibrate_confusion(&spec, l, Shots::Finite(8192), method, 11)?;
        let fixed = ReadoutMitigator::new(&calibrated)?.apply(&noisy)?;
        println!(
            "{label:>6}: ideal {:+.4}  noisy {:+.4}  mitigated {:+.4}",
            staggered_magnetization(&ideal)?,
            staggered_magnetization(&noisy)?,
            staggered_magnetization(&fixed)?
        );
    }
    Ok(())
}
