//! End-to-end runs of the `scarsim` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

use scarsim::experiments::{ExperimentConfig, Manifest, Report};

const SMALL: &[&str] = &[
    "--sites",
    "4",
    "--steps",
    "3",
    "--shots",
    "500",
    "--trajectories",
    "4",
    "--twirls",
    "2",
];

fn scarsim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_scarsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_into(dir: &Path, cmd: &str, extra: &[&str]) {
    let out = dir.to_str().unwrap();
    let mut args = vec![cmd];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", out]);
    let o = scarsim(&args);
    assert!(
        o.status.success(),
        "{cmd}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn every_subcommand_writes_a_manifest() {
    for (cmd, extra) in [
        ("zpi", vec![]),
        ("loschmidt", vec![]),
        ("cy", vec!["--regime", "chaotic"]),
        ("rzz-bench", vec!["--angles", "3", "--infinite-shots"]),
        ("qpt", vec!["--theta", "0.7", "--infinite-shots"]),
        ("oracle", vec![]),
    ] {
        let dir = tempfile::tempdir().unwrap();
        run_into(dir.path(), cmd, &extra);
        let m = Manifest::read(&dir.path().join("manifest.json")).unwrap();
        assert_eq!(m.command, cmd);
        assert!(!m.files.is_empty());
        for f in &m.files {
            let body = fs::read(dir.path().join(&f.name)).unwrap();
            assert_eq!(
                f.hash,
                scarsim::experiments::blob_hash(&body),
                "{cmd}/{}",
                f.name
            );
        }
    }
}

#[test]
fn rerun_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_into(a.path(), "zpi", &["--seed", "7"]);
    run_into(b.path(), "zpi", &["--seed", "7"]);
    assert_eq!(read_dir(a.path()), read_dir(b.path()));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.toml");
    fs::write(
        &file,
        "sites = 6\nsteps = 2\nseed = 5\ntwirls = 0\nzne_factors = [1.0]\nformat = \"json\"\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = scarsim(&[
        "oracle",
        "--config",
        file.to_str().unwrap(),
        "--steps",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Report =
        serde_json::from_str(&fs::read_to_string(out.join("results.json")).unwrap()).unwrap();
    let expected = ExperimentConfig {
        sites: 6,
        steps: 4,
        seed: 5,
        twirls: 0,
        zne_factors: vec![1.0],
        format: scarsim::experiments::OutputFormat::Json,
        ..Default::default()
    };
    assert_eq!(report.config, expected);
    assert_eq!(report.series("zpi_ideal").unwrap().len(), 5);
}

#[test]
fn csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), "zpi", &[]);
    let body = fs::read_to_string(dir.path().join("zpi_mitigated.csv")).unwrap();
    assert_eq!(
        body.lines().next().unwrap(),
        "step,Vt,value_re,value_im,std"
    );
    assert_eq!(body.lines().count(), 5);
    let batch = fs::read_to_string(dir.path().join("batch.jsonl")).unwrap();
    assert_eq!(batch.lines().count(), 3 * 2 * 4);
}

#[test]
fn invalid_input_fails_cleanly() {
    let o = scarsim(&["zpi", "--readout-mode", "sideways"]);
    assert!(!o.status.success());
    let o = scarsim(&["zpi", "--sites", "4", "--zne-factors", "2,1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = scarsim(&["zpi", "--noise-preset", "no-such-device"]);
    assert!(!o.status.success());
}
