//! Solve report, residual trace and point files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::write_json_pretty;
use crate::solver::{SolveReport, StartPoint, TraceRow};

/// Primal-dual point `(x, u, lambda, gamma)`. Missing blocks read as empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub u: Vec<f64>,
    #[serde(default, alias = "λ")]
    pub lambda: Vec<f64>,
    #[serde(default, alias = "γ")]
    pub gamma: Vec<f64>,
}

impl PointFile {
    pub fn from_report(report: &SolveReport) -> Self {
        PointFile {
            x: report.x.clone(),
            u: report.u.clone(),
            lambda: report.lambda.clone(),
            gamma: report.gamma.clone(),
        }
    }

    pub fn as_start(&self) -> StartPoint {
        StartPoint {
            x: Some(self.x.clone()),
            u: Some(self.u.clone()),
            lambda: Some(self.lambda.clone()),
            gamma: Some(self.gamma.clone()),
        }
    }
}

pub fn load_point(path: impl AsRef<Path>) -> Result<PointFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })
}

pub fn save_point(point: &PointFile, path: impl AsRef<Path>) -> Result<()> {
    write_json_pretty(point, path)
}

pub fn write_report(report: &SolveReport, path: impl AsRef<Path>) -> Result<()> {
    write_json_pretty(report, path)
}

/// Trace as CSV with header `iter,rho,res1,res2,objective`.
pub fn trace_to_csv(rows: &[TraceRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::Invalid(format!("trace serialization failed: {e}")))?;
    }
    if rows.is_empty() {
        w.write_record(["iter", "rho", "res1", "res2", "objective"])
            .map_err(|e| Error::Invalid(format!("trace serialization failed: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invalid(format!("trace serialization failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}

pub fn write_trace(rows: &[TraceRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, trace_to_csv(rows)?).map_err(|e| Error::io(path, e))
}
