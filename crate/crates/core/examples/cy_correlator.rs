//! The four-branch C_Y protocol against the two-time correlator, noiseless.

use scarsim::model::{ModelParams, TrotterOptions};
use scarsim::observables::{cy_oracle, cy_protocol_noiseless, CyPlan};

fn main() -> scarsim::Result<()> {
    let p = ModelParams::scar(6);
    let plan = CyPlan::new(p.sites);
    println!("{} measurement settings per step", plan.len());
    let measured = cy_protocol_noiseless(&p, TrotterOptions::default(), 20)?;
    let oracle = cy_oracle(&p, TrotterOptions::default(), 20)?;
    for (n, (m, o)) in measured.iter().zip(&oracle).enumerate() {
        println!(
            "{n:>3}  |C_Y| {:.5}  protocol {:+.5}{:+.5}i  oracle {:+.5}{:+.5}i",
            m.norm(),
            m.re,
            m.im,
            o.re,
            o.im
        );
    }
    Ok(())
}
