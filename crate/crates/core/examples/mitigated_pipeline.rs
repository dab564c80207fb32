//! A reduced mitigated run written to `target/scarsim-example`.

use std::path::Path;

use scarsim::experiments::{run_zpi, ExperimentConfig, OutputFormat};

fn main() -> scarsim::Result<()> {
    let cfg = ExperimentConfig {
        sites: 8,
        steps: 15,
        trajectories: 16,
        twirls: 4,
        ..Default::default()
    };
    let report = run_zpi(&cfg)?;
    let mitigated = report.series("zpi_mitigated").expect("series");
    let raw = report.series("zpi_unmitigated").expect("series");
    let ideal = report.series("zpi_projected").expect("series");
    for ((m, r), i) in mitigated.points.iter().zip(&raw.points).zip(&ideal.points) {
        println!(
            "{:>3}  mitigated {:+.3} ± {:.3}  raw {:+.3}  projected {:+.3}",
            m.step, m.value_re, m.std, r.value_re, i.value_re
        );
    }
    for (k, v) in &report.summary {
        println!("{k}: {v:.4}");
    }
    let files = report.write(Path::new("target/scarsim-example"), OutputFormat::Csv)?;
    println!("wrote {} files", files.len());
    Ok(())
}
