//! Line-delimited JSON record of generated circuit variants.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub step: usize,
    pub lambda: f64,
    pub twirl: usize,
    pub fold_seed: u64,
    pub twirl_seed: u64,
    pub folded_gates: usize,
    pub two_qubit_gates: usize,
}

pub fn write_jsonl<W: Write>(entries: &[BatchEntry], mut w: W) -> Result<()> {
    for e in entries {
        serde_json::to_writer(&mut w, e)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl(text: &str) -> Result<Vec<BatchEntry>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Into::into))
        .collect()
}
