//! Time series on a Trotter-step grid.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One CSV row: `step, Vt, value_re, value_im, std`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub step: usize,
    #[serde(rename = "Vt")]
    pub vt: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub std: f64,
}

impl SeriesPoint {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TimeSeries {
    pub name: String,
    pub points: Vec<SeriesPoint>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            points: Vec::new(),
        }
    }

    /// Appends a point; steps must increase strictly.
    pub fn push(&mut self, step: usize, vt: f64, value: Complex64, std: f64) -> Result<()> {
        if let Some(last) = self.points.last() {
            if step <= last.step {
                return Err(Error::GridMismatch);
            }
        }
        self.points.push(SeriesPoint {
            step,
            vt,
            value_re: value.re,
            value_im: value.im,
            std,
        });
        Ok(())
    }

    pub fn push_real(&mut self, step: usize, vt: f64, value: f64, std: f64) -> Result<()> {
        self.push(step, vt, Complex64::new(value, 0.0), std)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn steps(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.step).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.vt).collect()
    }

    pub fn real(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value_re).collect()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.points.iter().map(SeriesPoint::value).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.std).collect()
    }

    pub fn last(&self) -> Option<&SeriesPoint> {
        self.points.last()
    }

    pub fn same_grid(&self, other: &TimeSeries) -> bool {
        self.steps() == other.steps()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        if self.points.is_empty() {
            writer.write_record(["step", "Vt", "value_re", "value_im", "std"])?;
        }
        for p in &self.points {
            writer.serialize(p)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let points = reader
            .deserialize()
            .collect::<std::result::Result<Vec<SeriesPoint>, _>>()?;
        Ok(Self {
            name: name.into(),
            points,
        })
    }
}
