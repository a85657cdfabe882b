//! Labeled data sets for the kernel-learning instances.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{stream_rng, STREAM_POINTS};
use crate::error::{Error, Result};

pub const TWONORM_DIM: usize = 20;

/// Class mean offset of the standard two-norm set, `2 / sqrt(20)`.
pub fn twonorm_offset() -> f64 {
    2.0 / (TWONORM_DIM as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    /// `+1` or `-1` per point.
    pub labels: Vec<f64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn has_both_classes(&self) -> bool {
        self.labels.iter().any(|&l| l > 0.0) && self.labels.iter().any(|&l| l < 0.0)
    }
}

/// `n_points / 2` points from `N((a, .., a), I)` labeled `+1`, followed by as
/// many from `N((-a, .., -a), I)` labeled `-1`.
pub fn gen_twonorm(n_points: usize, dim: usize, a: f64, seed: u64) -> Result<Dataset> {
    if !n_points.is_multiple_of(2) || n_points == 0 {
        return Err(Error::Spec(format!(
            "n_points must be even and positive, got {n_points}"
        )));
    }
    if dim == 0 {
        return Err(Error::Spec("dim must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, STREAM_POINTS);
    let half = n_points / 2;
    let mut features = Vec::with_capacity(n_points);
    let mut labels = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let label = if k < half { 1.0 } else { -1.0 };
        let point = (0..dim)
            .map(|_| label * a + rng.sample::<f64, _>(StandardNormal))
            .collect();
        features.push(point);
        labels.push(label);
    }
    Ok(Dataset { features, labels })
}

/// Reads `label,feat1,...,featk` rows; labels must be `-1` or `+1` and every
/// row the same width. A first row that does not parse as numbers is taken
/// as a header.
pub fn load_csv(path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(row as u64 + 1, |p| p.line()) as usize;
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if row == 0 => continue,
            Err(e) => {
                return Err(Error::Parse {
                    line,
                    column: 0,
                    field: path.display().to_string(),
                    message: e.to_string(),
                })
            }
        };
        if values.len() < 2 {
            return Err(Error::Parse {
                line,
                column: 0,
                field: path.display().to_string(),
                message: "expected a label and at least one feature".into(),
            });
        }
        let label = values[0];
        if label != 1.0 && label != -1.0 {
            return Err(Error::Parse {
                line,
                column: 1,
                field: "label".into(),
                message: format!("label must be -1 or +1, got {label}"),
            });
        }
        if let Some(first) = features.first().map(Vec::len) {
            if first != values.len() - 1 {
                return Err(Error::Parse {
                    line,
                    column: 0,
                    field: path.display().to_string(),
                    message: format!("expected {first} features, found {}", values.len() - 1),
                });
            }
        }
        labels.push(label);
        features.push(values[1..].to_vec());
    }
    Ok(Dataset { features, labels })
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            line: 0,
            column: 0,
            field: path.display().to_string(),
            message: format!("{other:?}"),
        },
    }
}
