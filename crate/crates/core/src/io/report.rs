use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{DetectorParams, JunctionReport};

/// JSON layout of a detection report. Field order is the serialized key
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub num_junctions: usize,
    pub labels: Vec<usize>,
    pub eigenvalues_head: Vec<f64>,
    pub objective: f64,
    pub runtime_seconds: f64,
    pub params: DetectorParams,
}

impl From<&JunctionReport> for ReportFile {
    fn from(r: &JunctionReport) -> Self {
        ReportFile {
            num_junctions: r.num_junctions,
            labels: r.labels.clone(),
            eigenvalues_head: r.eigenvalues_head.clone(),
            objective: r.objective,
            runtime_seconds: r.runtime_seconds,
            params: r.params,
        }
    }
}

/// Pretty-printed JSON. Floats are written with the shortest digits that
/// round-trip exactly.
pub fn report_to_json(report: &JunctionReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&ReportFile::from(report))?;
    s.push('\n');
    Ok(s)
}

pub fn write_report(report: &JunctionReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, report_to_json(report)?).map_err(|e| Error::io(path, e))
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ReportFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
