//! Linear-inversion process tomography of R_ZZ(θ) and the folding slope
//! that separates gate error from preparation and readout error.

use scarsim::model::{rzz_gates, RzzImpl};
use scarsim::noise::NoiseSpec;
use scarsim::qsim::{Circuit, Shots};
use scarsim::tomography::{qpt_reconstruct, spam_free_error};

fn main() -> scarsim::Result<()> {
    let model = NoiseSpec::casablanca_like().compile()?;
    let shots = Shots::Finite(4096);
    for imp in [RzzImpl::TwoCnot, RzzImpl::ScaledRzx] {
        for theta in [0.4, 1.2, 2.0] {
            let gate = Circuit::from_gates(2, rzz_gates(0, 1, theta, imp))?;
            let q = qpt_reconstruct(&gate, &model, shots, 1)?;
            let s = spam_free_error(&gate, &model, &[1, 3, 5], 2, shots, 2)?;
            println!(
                "{:>10} θ={theta:.1}  F_avg {:.4}  CP {}  slope {:.4} ± {:.4}",
                imp.name(),
                q.average_fidelity,
                q.completely_positive,
                s.epsilon,
                s.epsilon_std
            );
        }
    }
    Ok(())
}
