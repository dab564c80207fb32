//! Dynamical decoupling: `τ/4 − X_π − τ/2 − X_{−π} − τ/4` in idle windows.

use std::f64::consts::PI;

use crate::qsim::{Circuit, Gate, IdleInterval};
use crate::Result;

/// Replaces each annotated idle window longer than `2·t_x_pi` with the echo
/// sequence, where `τ = T_idle − 2·t_x_pi`. Shorter windows are kept.
pub fn insert_dd(circuit: &Circuit, t_x_pi: f64) -> Result<Circuit> {
    let mut replace = vec![None; circuit.len()];
    for iv in circuit.idle_intervals() {
        if iv.length > 2.0 * t_x_pi {
            replace[iv.position] = Some(*iv);
        }
    }
    let mut out = Circuit::new(circuit.width());
    let mut intervals = Vec::new();
    let mut old_to_new = vec![0; circuit.len()];
    for (i, gate) in circuit.gates().iter().enumerate() {
        old_to_new[i] = out.len();
        match replace[i] {
            None => {
                out.push(gate.clone())?;
            }
            Some(iv) => {
                let tau = iv.length - 2.0 * t_x_pi;
                let q = iv.qubit;
                let mut t = iv.start;
                let mut delay = |out: &mut Circuit, len: f64, t: &mut f64| -> Result<()> {
                    intervals.push(IdleInterval {
                        qubit: q,
                        start: *t,
                        length: len,
                        position: out.len(),
                    });
                    out.push(Gate::Delay { qubit: q, ns: len })?;
                    *t += len;
                    Ok(())
                };
                delay(&mut out, tau / 4.0, &mut t)?;
                out.push(Gate::Rx {
                    qubit: q,
                    theta: PI,
                })?;
                t += t_x_pi;
                delay(&mut out, tau / 2.0, &mut t)?;
                out.push(Gate::Rx {
                    qubit: q,
                    theta: -PI,
                })?;
                t += t_x_pi;
                delay(&mut out, tau / 4.0, &mut t)?;
            }
        }
    }
    for iv in circuit.idle_intervals() {
        if replace[iv.position].is_none() {
            intervals.push(IdleInterval {
                position: old_to_new[iv.position],
                ..*iv
            });
        }
    }
    out.set_idle_intervals(intervals)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{run_density, schedule_idles, NoiseSpec};
    use crate::qsim::{dense, run_circuit, DensityOperator, Statevector};

    #[test]
    fn no_windows_no_change() {
        let c = Circuit::from_gates(2, [Gate::H(0), Gate::H(1)]).unwrap();
        assert_eq!(insert_dd(&c, 35.0).unwrap(), c);
    }

    #[test]
    fn opposite_pulses_cancel() {
        let u = Gate::Rx {
            qubit: 0,
            theta: -PI,
        }
        .local_matrix()
            * Gate::Rx {
                qubit: 0,
                theta: PI,
            }
            .local_matrix();
        assert!(dense::max_abs_diff(&u, &dense::identity(2)) < 1e-12);
    }

    #[test]
    fn echo_cancels_static_detuning() {
        // Qubit 1 idles while qubit 0 runs a long two-qubit-free sequence.
        let model = NoiseSpec::noiseless().compile().unwrap();
        let mut c = Circuit::new(2);
        c.push(Gate::H(1)).unwrap();
        for _ in 0..40 {
            c.push(Gate::Rx {
                qubit: 0,
                theta: 0.3,
            })
            .unwrap();
        }
        let scheduled = schedule_idles(&c, &model).unwrap();
        assert!(!scheduled.idle_intervals().is_empty());
        let t_x = model.spec().pulse.single_qubit_ns;
        let with_dd = insert_dd(&scheduled, t_x).unwrap();
        assert!(with_dd.len() > scheduled.len());

        let ideal = run_circuit(&Statevector::zero(2), &c).unwrap();
        let rho0 = DensityOperator::pure(&Statevector::zero(2)).unwrap();
        let target = DensityOperator::pure(&ideal).unwrap();
        let fidelity = |circuit: &Circuit| {
            let rho =
                run_density(&rho0, std::slice::from_ref(circuit), &model, &[0.0, 0.003]).unwrap();
            rho[0].expectation(target.matrix()).re
        };
        assert!((fidelity(&with_dd) - 1.0).abs() < 1e-10);
        assert!(fidelity(&scheduled) < 1.0 - 1e-3);
    }
}
