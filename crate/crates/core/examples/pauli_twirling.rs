//! A coherent over-rotation on R_ZZ becomes a stochastic Pauli channel once
//! averaged over the 16 twirl assignments.

use scarsim::mitigation::{twirl_circuit, twirled_error_channel};
use scarsim::noise::{error_channel, NoiseSpec};
use scarsim::qsim::{is_pauli_stochastic, max_off_diagonal, pauli_transfer_matrix, Circuit, Gate};

fn main() -> scarsim::Result<()> {
    let spec = NoiseSpec {
        coherent_overrotation: 0.1,
        ..NoiseSpec::noiseless()
    };
    let model = spec.compile()?;
    let gate = Gate::Rzz {
        a: 0,
        b: 1,
        theta: 1.2,
    };

    let raw = pauli_transfer_matrix(&error_channel(&gate, &model)?)?;
    let twirled = pauli_transfer_matrix(&twirled_error_channel(&gate, &model)?)?;
    println!(
        "off-diagonal PTM weight: {:.3e} -> {:.3e}",
        max_off_diagonal(&raw),
        max_off_diagonal(&twirled)
    );
    println!(
        "stochastic after twirl: {}",
        is_pauli_stochastic(&twirled, 1e-12)
    );
    let diag: Vec<String> = (0..16).map(|k| format!("{:.4}", twirled[(k, k)])).collect();
    println!("diagonal: {}", diag.join(" "));

    let c = Circuit::from_gates(
        2,
        [
            gate,
            Gate::Cnot {
                control: 1,
                target: 0,
            },
        ],
    )?;
    println!("\none twirl instance:");
    for g in twirl_circuit(&c, 7)?.gates() {
        println!("  {g:?}");
    }
    Ok(())
}
