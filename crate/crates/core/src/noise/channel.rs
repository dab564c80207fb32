use super::spec::NoiseModel;
use crate::qsim::dense;
use crate::qsim::{Gate, KrausChannel, PauliString};
use crate::{Error, Result};

/// Rotation `exp(-iθP/2)` for a two-qubit generator as a gate.
pub(crate) fn rotation_gate(generator: &PauliString, qubits: &[usize], theta: f64) -> Result<Gate> {
    let m = dense::expm_hermitian(&generator.matrix(), theta / 2.0);
    Gate::unitary(qubits.to_vec(), m)
}

/// Modeled error following `gate`: the coherent over-rotation (if any), then
/// the stochastic Pauli channel.
pub fn error_channel(gate: &Gate, model: &NoiseModel) -> Result<KrausChannel> {
    let n = gate.qubits().len();
    let mut ch = KrausChannel::identity(n);
    if let Some((generator, delta)) = model.coherent_error(gate) {
        let local: Vec<usize> = (0..n).collect();
        let rot = rotation_gate(&generator, &local, delta)?;
        ch = ch.then(&KrausChannel::unitary(rot.local_matrix())?)?;
    }
    if let Some(probs) = model.pauli_error(gate) {
        ch = ch.then(&KrausChannel::pauli(n, &probs)?)?;
    }
    Ok(ch)
}

/// Ideal unitary of a two-qubit `gate` followed by [`error_channel`].
pub fn noisy_gate_channel(gate: &Gate, model: &NoiseModel) -> Result<KrausChannel> {
    if !gate.is_two_qubit() {
        return Err(Error::InvalidParameter(format!(
            "{gate:?} is not a two-qubit gate"
        )));
    }
    KrausChannel::unitary(gate.local_matrix())?.then(&error_channel(gate, model)?)
}
