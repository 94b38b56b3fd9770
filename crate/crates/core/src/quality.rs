//! Post-extraction feature filtration and the scaled robust sigmoid
//! normalization used before classification and projection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::stats;

/// A column is constant when its sample std is at most this multiple of
/// max(1, |column mean|).
pub const CONSTANT_REL_TOL: f64 = 1e-12;

/// The sigmoid's scale is this multiple of the interquartile range.
pub const IQR_SCALE: f64 = 1.35;

// Normalized values are kept strictly inside (0, 1) even when the logistic
// function saturates in floating point.
const UNIT_LO: f64 = f64::MIN_POSITIVE;
const UNIT_HI: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RemovalReason {
    HasSpecial,
    Constant,
    ZeroIqr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub kept_feature_ids: Vec<String>,
    pub removed: BTreeMap<String, RemovalReason>,
}

impl FilterReport {
    /// Column indices of the kept features in `matrix`.
    pub fn kept_columns(&self, matrix: &FeatureMatrix) -> Vec<usize> {
        self.kept_feature_ids
            .iter()
            .map(|id| matrix.column_index(id).expect("report belongs to matrix"))
            .collect()
    }
}

fn is_constant(column: &[f64]) -> bool {
    stats::sample_std(column) <= CONSTANT_REL_TOL * stats::mean(column).abs().max(1.0)
}

/// Drops every column with a special value in any row, then every column
/// that is constant across the dataset.
pub fn filter_features(matrix: &FeatureMatrix) -> Result<FilterReport> {
    if matrix.n_rows() == 0 || matrix.n_cols() == 0 {
        return Err(Error::InvalidArgument("empty feature matrix".into()));
    }
    let mut kept = Vec::new();
    let mut removed = BTreeMap::new();
    for (c, id) in matrix.feature_ids.iter().enumerate() {
        if matrix.column_quality(c).iter().any(|q| !q.is_ok()) {
            removed.insert(id.clone(), RemovalReason::HasSpecial);
        } else if is_constant(&matrix.column(c)) {
            removed.insert(id.clone(), RemovalReason::Constant);
        } else {
            kept.push(id.clone());
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyResult);
    }
    Ok(FilterReport {
        kept_feature_ids: kept,
        removed,
    })
}

/// Applies a filter report, keeping only its surviving columns.
pub fn apply_filter(matrix: &FeatureMatrix, report: &FilterReport) -> FeatureMatrix {
    matrix.select_columns(&report.kept_columns(matrix))
}

/// `1 / (1 + exp(−(value − median) / (1.35 · iqr)))`, kept inside (0, 1).
pub fn scaled_robust_sigmoid(value: f64, median: f64, iqr: f64) -> f64 {
    let s = 1.0 / (1.0 + (-(value - median) / (IQR_SCALE * iqr)).exp());
    s.clamp(UNIT_LO, UNIT_HI)
}

/// Per-column median and interquartile range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmoidScaler {
    pub medians: Vec<f64>,
    pub iqrs: Vec<f64>,
}

impl SigmoidScaler {
    /// Fits on the given rows of each column. Columns with zero IQR keep an
    /// IQR of 0 and are reported by [`SigmoidScaler::zero_iqr_columns`].
    pub fn fit(columns: &[Vec<f64>]) -> Self {
        let (medians, iqrs) = columns
            .iter()
            .map(|col| {
                let s = stats::sorted(col);
                (
                    stats::quantile_sorted(&s, 0.5),
                    stats::quantile_sorted(&s, 0.75) - stats::quantile_sorted(&s, 0.25),
                )
            })
            .unzip();
        SigmoidScaler { medians, iqrs }
    }

    pub fn zero_iqr_columns(&self) -> Vec<usize> {
        (0..self.iqrs.len()).filter(|&c| !(self.iqrs[c] > 0.0)).collect()
    }

    /// Transforms one row. Zero-IQR columns carry no scale and map to 0.5.
    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(c, &v)| {
                if self.iqrs[c] > 0.0 {
                    scaled_robust_sigmoid(v, self.medians[c], self.iqrs[c])
                } else {
                    0.5
                }
            })
            .collect()
    }
}

/// Feature values mapped into (0, 1), one row per series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedMatrix {
    pub series_ids: Vec<String>,
    pub feature_ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Columns dropped because their interquartile range was zero.
    pub zero_iqr: Vec<String>,
}

impl NormalizedMatrix {
    pub fn column(&self, c: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[c]).collect()
    }
}

/// Normalizes every column with its own full-dataset median and IQR.
/// Expects a filtered matrix (no special values).
pub fn normalize_sigmoid(matrix: &FeatureMatrix) -> Result<NormalizedMatrix> {
    if (0..matrix.n_cols()).any(|c| matrix.column_quality(c).iter().any(|q| !q.is_ok())) {
        return Err(Error::InvalidArgument(
            "normalization needs a filtered matrix without special values".into(),
        ));
    }
    let columns: Vec<Vec<f64>> = (0..matrix.n_cols()).map(|c| matrix.column(c)).collect();
    let scaler = SigmoidScaler::fit(&columns);
    let zero = scaler.zero_iqr_columns();
    let keep: Vec<usize> = (0..matrix.n_cols()).filter(|c| !zero.contains(c)).collect();
    if keep.is_empty() {
        return Err(Error::EmptyResult);
    }
    let rows = (0..matrix.n_rows())
        .map(|r| {
            keep.iter()
                .map(|&c| scaled_robust_sigmoid(matrix.value(r, c), scaler.medians[c], scaler.iqrs[c]))
                .collect()
        })
        .collect();
    Ok(NormalizedMatrix {
        series_ids: matrix.series_ids.clone(),
        feature_ids: keep.iter().map(|&c| matrix.feature_ids[c].clone()).collect(),
        rows,
        zero_iqr: zero.iter().map(|&c| matrix.feature_ids[c].clone()).collect(),
    })
}
