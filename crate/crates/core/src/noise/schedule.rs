//! As-soon-as-possible scheduling that exposes idle windows as `Delay` gates.

use super::spec::NoiseModel;
use crate::qsim::{Circuit, Gate, IdleInterval};
use crate::Result;

const GAP_TOL: f64 = 1e-9;

/// Schedules `circuit` ASAP from time zero and inserts a `Delay` for every gap
/// on every qubit, including the tail up to the circuit's makespan. Existing
/// delays are kept and count as busy time.
pub fn schedule_idles(circuit: &Circuit, model: &NoiseModel) -> Result<Circuit> {
    let width = circuit.width();
    let mut avail = vec![0.0f64; width];
    let mut out = Circuit::new(width);
    let mut intervals = Vec::new();
    let mut idle = |out: &mut Circuit, q: usize, from: f64, to: f64| -> Result<()> {
        if to - from > GAP_TOL {
            intervals.push(IdleInterval {
                qubit: q,
                start: from,
                length: to - from,
                position: out.len(),
            });
            out.push(Gate::Delay {
                qubit: q,
                ns: to - from,
            })?;
        }
        Ok(())
    };
    for gate in circuit.gates() {
        let qubits = gate.qubits();
        let start = qubits.iter().map(|&q| avail[q]).fold(0.0, f64::max);
        for &q in &qubits {
            idle(&mut out, q, avail[q], start)?;
        }
        out.push(gate.clone())?;
        let end = start + model.gate_duration(gate);
        for &q in &qubits {
            avail[q] = end;
        }
    }
    let makespan = avail.iter().cloned().fold(0.0, f64::max);
    for (q, &t) in avail.iter().enumerate() {
        idle(&mut out, q, t, makespan)?;
    }
    out.set_idle_intervals(intervals)?;
    Ok(out)
}

/// Total scheduled duration of a circuit.
pub fn makespan(circuit: &Circuit, model: &NoiseModel) -> f64 {
    let mut avail = vec![0.0f64; circuit.width()];
    for gate in circuit.gates() {
        let qubits = gate.qubits();
        let start = qubits.iter().map(|&q| avail[q]).fold(0.0, f64::max);
        for &q in &qubits {
            avail[q] = start + model.gate_duration(gate);
        }
    }
    avail.into_iter().fold(0.0, f64::max)
}
