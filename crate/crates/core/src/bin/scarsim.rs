//! Command-line front end for the scar experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scarsim::experiments::{
    bench_angles, run_cy, run_loschmidt, run_oracle, run_qpt, run_rzz_bench, run_zpi,
    ExperimentConfig, OutputFormat, Regime, Report,
};
use scarsim::mitigation::ReadoutMode;
use scarsim::model::RzzImpl;

#[derive(Parser)]
#[command(
    name = "scarsim",
    version,
    about = "Trotterized scar dynamics with hardware-like noise and error mitigation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Staggered magnetization, per-site magnetization and accumulated error.
    Zpi(Common),
    /// Loschmidt echo with zero and one allowed flips.
    Loschmidt(Common),
    /// Connected correlator C_Y(t).
    Cy {
        #[command(flatten)]
        common: Common,
        /// Overrides --v, --omega and --dt with a preset regime.
        #[arg(long)]
        regime: Option<Regime>,
    },
    /// R_ZZ(θ) duration, modeled error and fidelity slope per compilation.
    RzzBench {
        #[command(flatten)]
        common: Common,
        /// Number of angles on [0.2, 2.4].
        #[arg(long, default_value_t = 12)]
        angles: usize,
    },
    /// Process tomography of one R_ZZ(θ).
    Qpt {
        #[command(flatten)]
        common: Common,
        /// Rotation angle; defaults to 2 V dt.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Noiseless references: ideal and projected Trotter, exact evolution, C_Y.
    Oracle(Common),
}

#[derive(Args)]
struct Common {
    /// TOML file mirroring the experiment configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// two-cnot, scaled-rzx or native.
    #[arg(long = "impl")]
    rzz_impl: Option<RzzImpl>,
    #[arg(long)]
    shots: Option<u64>,
    /// Use exact outcome distributions instead of sampled shots.
    #[arg(long)]
    infinite_shots: bool,
    /// Noise trajectories per circuit variant.
    #[arg(long)]
    trajectories: Option<usize>,
    /// Twirl instances per scale factor; 0 disables twirling.
    #[arg(long)]
    twirls: Option<usize>,
    /// Comma-separated scale factors, starting at 1.
    #[arg(long, value_delimiter = ',')]
    zne_factors: Option<Vec<f64>>,
    /// Preset name or path to a noise TOML file.
    #[arg(long)]
    noise_preset: Option<String>,
    #[arg(long)]
    no_postselect: bool,
    #[arg(long)]
    readout_mode: Option<ReadoutMode>,
    #[arg(long)]
    dd: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory; without it results go to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

impl Common {
    fn resolve(&self) -> scarsim::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone();
                }
            )*};
        }
        set!(
            sites,
            steps,
            dt,
            v,
            omega,
            rzz_impl,
            shots,
            trajectories,
            twirls,
            zne_factors,
            noise_preset,
            readout_mode,
            seed,
            trials,
            format
        );
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        cfg.infinite_shots |= self.infinite_shots;
        cfg.dd |= self.dd;
        if self.no_postselect {
            cfg.postselect = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(report: &Report) -> scarsim::Result<()> {
    let cfg = &report.config;
    match &cfg.out {
        Some(dir) => {
            for path in report.write(dir, cfg.format)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            for (name, body) in report.render(cfg.format)? {
                if name != "manifest.json" {
                    println!("# {name}\n{body}");
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> scarsim::Result<()> {
    let report = match cli.command {
        Command::Zpi(c) => run_zpi(&c.resolve()?)?,
        Command::Loschmidt(c) => run_loschmidt(&c.resolve()?)?,
        Command::Cy { common, regime } => run_cy(&common.resolve()?, regime)?,
        Command::RzzBench { common, angles } => {
            run_rzz_bench(&common.resolve()?, &bench_angles(angles))?
        }
        Command::Qpt { common, theta } => run_qpt(&common.resolve()?, theta)?,
        Command::Oracle(c) => run_oracle(&c.resolve()?)?,
    };
    emit(&report)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
