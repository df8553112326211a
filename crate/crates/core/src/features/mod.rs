//! Numeric feature tables and their support/quantile summaries.

mod log;
mod ocel;

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pyfmt;

pub use self::log::{log_feature_table, log_feature_table_with, LogFeatureOptions};
pub use self::ocel::{ocel_feature_table, ocel_feature_table_with, OcelFeatureOptions};

pub const QUANTILE_POINTS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Linear interpolation between order statistics at index `p * (n - 1)`.
pub fn quantiles(values: &[f64], points: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("quantiles of an empty list".into()));
    }
    if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("quantile point {p} outside [0, 1]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let last = sorted.len() - 1;
    Ok(points
        .iter()
        .map(|&p| {
            let h = p * last as f64;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(last);
            (p, lerp(sorted[lo], sorted[hi], h - lo as f64))
        })
        .collect())
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    let diff = b - a;
    if t >= 0.5 {
        b - diff * (1.0 - t)
    } else {
        a + diff * t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feature {
    pub name: String,
    pub description: String,
    pub values: Vec<f64>,
}

/// Rows are cases or objects; every feature holds one value per row.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FeatureTable {
    pub row_ids: Vec<String>,
    pub features: Vec<Feature>,
}

impl FeatureTable {
    pub fn new(row_ids: Vec<String>) -> Self {
        Self { row_ids, features: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, description: impl Into<String>, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.row_ids.len());
        self.features.push(Feature { name: name.into(), description: description.into(), values });
    }

    pub fn feature(&self, name: &str) -> Option<&Feature> {
        self.features.iter().find(|f| f.name == name)
    }

    pub fn row(&self, id: &str) -> Option<Vec<f64>> {
        let i = self.row_ids.iter().position(|r| r == id)?;
        Some(self.features.iter().map(|f| f.values[i]).collect())
    }

    /// Comma-separated export: a description row, a name row, then one row
    /// per case/object.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(std::iter::once("").chain(self.features.iter().map(|f| f.description.as_str())))?;
        w.write_record(std::iter::once("id").chain(self.features.iter().map(|f| f.name.as_str())))?;
        for (i, id) in self.row_ids.iter().enumerate() {
            let cells = self.features.iter().map(|f| pyfmt::float(f.values[i]));
            w.write_record(std::iter::once(id.clone()).chain(cells))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureStat {
    pub name: String,
    pub description: String,
    /// Number of non-zero values.
    pub support: usize,
    /// Quantiles of the non-zero values; empty when `support == 0`.
    pub quantiles: Vec<(f64, f64)>,
}

/// Per-feature statistics in table order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FeatureSummary {
    pub features: Vec<FeatureStat>,
}

pub fn summarize(table: &FeatureTable) -> FeatureSummary {
    FeatureSummary {
        features: table
            .features
            .iter()
            .map(|f| {
                let non_zero: Vec<f64> = f.values.iter().copied().filter(|v| *v != 0.0).collect();
                FeatureStat {
                    name: f.name.clone(),
                    description: f.description.clone(),
                    support: non_zero.len(),
                    quantiles: quantiles(&non_zero, &QUANTILE_POINTS).unwrap_or_default(),
                }
            })
            .collect(),
    }
}
