//! Result bundles and their on-disk layout.
//!
//! `csv` writes one `<series>.csv` per observable, one CSV per table, the
//! batch manifest as `batch.jsonl`, and `manifest.json`. `json` writes
//! everything into `results.json` plus `manifest.json`. Every file is a pure
//! function of the report, so reruns with the same config and seed are
//! byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, OutputFormat};
use crate::mitigation::{write_jsonl, BatchEntry};
use crate::observables::TimeSeries;
use crate::{Error, Result};

/// Named table with string cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Cells of one column.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }

    /// Column parsed as floats; unparsable cells become NaN.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        Some(
            self.column(name)?
                .iter()
                .map(|s| s.parse().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Everything an experiment produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: ExperimentConfig,
    pub series: Vec<TimeSeries>,
    pub tables: Vec<Table>,
    /// Scalar results, e.g. `D` at the final step.
    pub summary: BTreeMap<String, f64>,
    /// Steps whose estimate is missing (e.g. nothing survived postselection).
    pub flagged_steps: Vec<usize>,
    pub batch: Vec<BatchEntry>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &ExperimentConfig) -> Self {
        Self {
            command: command.into(),
            config: config.clone(),
            series: Vec::new(),
            tables: Vec::new(),
            summary: BTreeMap::new(),
            flagged_steps: Vec::new(),
            batch: Vec::new(),
        }
    }

    pub fn series(&self, name: &str) -> Option<&TimeSeries> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn retain_series(&mut self, keep: impl FnMut(&TimeSeries) -> bool) {
        self.series.retain(keep);
    }

    /// Renders the files of `format` as `(relative path, contents)`. The
    /// output directory is left out of the recorded config so the bytes do
    /// not depend on where they are written.
    pub fn render(&self, format: OutputFormat) -> Result<Vec<(String, String)>> {
        let mut located = self.clone();
        located.config.out = None;
        located.render_inner(format)
    }

    fn render_inner(&self, format: OutputFormat) -> Result<Vec<(String, String)>> {
        let mut files = Vec::new();
        match format {
            OutputFormat::Csv => {
                for s in &self.series {
                    files.push((format!("{}.csv", s.name), s.to_csv_string()?));
                }
                for t in &self.tables {
                    files.push((format!("{}.csv", t.name), t.to_csv_string()?));
                }
                files.push(("report.json".into(), to_json(&ReportMeta::from(self))?));
                if !self.batch.is_empty() {
                    let mut buf = Vec::new();
                    write_jsonl(&self.batch, &mut buf)?;
                    files.push((
                        "batch.jsonl".into(),
                        String::from_utf8(buf).expect("json is utf-8"),
                    ));
                }
            }
            OutputFormat::Json => files.push(("results.json".into(), to_json(self)?)),
        }
        let manifest = Manifest {
            command: self.command.clone(),
            seed: self.config.seed,
            config: self.config.clone(),
            files: files
                .iter()
                .map(|(name, body)| FileEntry {
                    name: name.clone(),
                    bytes: body.len(),
                    hash: blob_hash(body.as_bytes()),
                })
                .collect(),
        };
        files.push(("manifest.json".into(), to_json(&manifest)?));
        Ok(files)
    }

    /// Writes the rendered files under `dir`, creating it if needed.
    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        self.render(format)?
            .into_iter()
            .map(|(name, body)| {
                let path = dir.join(name);
                fs::write(&path, body)?;
                Ok(path)
            })
            .collect()
    }
}

#[derive(Serialize)]
struct ReportMeta<'a> {
    command: &'a str,
    summary: &'a BTreeMap<String, f64>,
    flagged_steps: &'a [usize],
    series: Vec<&'a str>,
    tables: Vec<&'a str>,
}

impl<'a> From<&'a Report> for ReportMeta<'a> {
    fn from(r: &'a Report) -> Self {
        Self {
            command: &r.command,
            summary: &r.summary,
            flagged_steps: &r.flagged_steps,
            series: r.series.iter().map(|s| s.name.as_str()).collect(),
            tables: r.tables.iter().map(|t| t.name.as_str()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: usize,
    pub hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Git blob id computed with SHA-256: `sha256("blob <len>\0" ++ content)`.
pub fn blob_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let cfg = ExperimentConfig {
            sites: 4,
            steps: 2,
            seed: 9,
            ..Default::default()
        };
        let mut r = Report::new("zpi", &cfg);
        let mut s = TimeSeries::new("zpi_ideal");
        s.push_real(0, 0.0, -1.0, 0.0).unwrap();
        s.push_real(1, 1.0, -0.5, 0.01).unwrap();
        r.series.push(s);
        let mut t = Table::new("bench", &["theta", "duration_ns"]);
        t.push(vec!["0.2".into(), "300".into()]);
        r.tables.push(t);
        r.summary.insert("d_final".into(), 0.1);
        r
    }

    #[test]
    fn csv_layout() {
        let files = sample().render(OutputFormat::Csv).unwrap();
        let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            ["zpi_ideal.csv", "bench.csv", "report.json", "manifest.json"]
        );
        assert!(files[0].1.starts_with("step,Vt,value_re,value_im,std\n"));
    }

    #[test]
    fn manifest_round_trips_config() {
        let dir = tempfile::tempdir().unwrap();
        let r = sample();
        r.write(dir.path(), OutputFormat::Csv).unwrap();
        let m = Manifest::read(&dir.path().join("manifest.json")).unwrap();
        assert_eq!(m.config, r.config);
        assert_eq!(m.seed, 9);
        let body = fs::read(dir.path().join("zpi_ideal.csv")).unwrap();
        assert_eq!(m.files[0].hash, blob_hash(&body));
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let files = r.render(OutputFormat::Json).unwrap();
        let back: Report = serde_json::from_str(&files[0].1).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn blob_hash_known_value() {
        // printf 'blob 0\0' | sha256sum
        assert_eq!(
            blob_hash(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }

    #[test]
    fn render_is_deterministic() {
        assert_eq!(
            sample().render(OutputFormat::Csv).unwrap(),
            sample().render(OutputFormat::Csv).unwrap()
        );
    }
}
