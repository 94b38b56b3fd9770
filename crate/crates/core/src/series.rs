//! Domain types shared by every stage, plus elementary preprocessing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, RejectReason, Result};
use crate::stats;

/// Fraction of a recording that may be trimmed as a leading or trailing gap.
pub const DEFAULT_MAX_MISSING_FRACTION: f64 = 0.15;

/// One univariate, uniformly sampled recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub id: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_rate_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Self {
        TimeSeries {
            id: id.into(),
            values,
            sampling_rate_hz: None,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// An ordered collection of series with the class bookkeeping used by the
/// balanced-accuracy and inference code.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    series: Vec<TimeSeries>,
    classes: Vec<String>,
    class_counts: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset, inferring classes from the labels present. Classes
    /// are ordered lexicographically.
    pub fn new(series: Vec<TimeSeries>) -> Self {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for s in &series {
            if let Some(label) = &s.label {
                *counts.entry(label.as_str()).or_default() += 1;
            }
        }
        let classes = counts.keys().map(|c| c.to_string()).collect();
        let class_counts = counts.values().copied().collect();
        Dataset {
            series,
            classes,
            class_counts,
        }
    }

    pub fn series(&self) -> &[TimeSeries] {
        &self.series
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_counts(&self) -> &[usize] {
        &self.class_counts
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Class index of every series, `None` for unlabeled ones.
    pub fn label_indices(&self) -> Vec<Option<usize>> {
        self.series
            .iter()
            .map(|s| {
                s.label
                    .as_ref()
                    .and_then(|l| self.classes.iter().position(|c| c == l))
            })
            .collect()
    }
}

/// Per-cell outcome of a feature computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QualityCode {
    Ok,
    NotFinite,
    DegenerateInput,
    TooShort,
    NoConvergence,
}

impl QualityCode {
    pub const ALL: [QualityCode; 5] = [
        QualityCode::Ok,
        QualityCode::NotFinite,
        QualityCode::DegenerateInput,
        QualityCode::TooShort,
        QualityCode::NoConvergence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QualityCode::Ok => "OK",
            QualityCode::NotFinite => "NOT_FINITE",
            QualityCode::DegenerateInput => "DEGENERATE_INPUT",
            QualityCode::TooShort => "TOO_SHORT",
            QualityCode::NoConvergence => "NO_CONVERGENCE",
        }
    }

    pub fn is_ok(self) -> bool {
        self == QualityCode::Ok
    }
}

impl fmt::Display for QualityCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QualityCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QualityCode::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown quality code `{s}`")))
    }
}

impl From<&Error> for QualityCode {
    fn from(err: &Error) -> Self {
        match err {
            Error::TooShort { .. } => QualityCode::TooShort,
            Error::NoConvergence(_) => QualityCode::NoConvergence,
            Error::NotFinite => QualityCode::NotFinite,
            _ => QualityCode::DegenerateInput,
        }
    }
}

/// Standardizes to zero mean and unit sample standard deviation.
pub fn zscore(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: values.len(),
        });
    }
    let mean = stats::mean(values);
    let sd = stats::sample_std(values);
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(Error::DegenerateInput("zero standard deviation"));
    }
    Ok(values.iter().map(|v| (v - mean) / sd).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub length: usize,
    pub all_finite: bool,
    pub constant: bool,
}

pub fn validate(series: &TimeSeries) -> ValidationReport {
    let values = &series.values;
    let all_finite = values.iter().all(|v| v.is_finite());
    let constant = values.windows(2).all(|w| w[0] == w[1]);
    ValidationReport {
        length: values.len(),
        all_finite,
        constant,
    }
}

/// Removes a single leading or trailing block of missing values, provided it
/// is shorter than `max_fraction` of the recording. Anything else is rejected.
pub fn trim_missing(values: &[Option<f64>], max_fraction: f64) -> Result<Vec<f64>> {
    if !(max_fraction > 0.0 && max_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "max_fraction must lie in (0, 1), got {max_fraction}"
        )));
    }
    let n = values.len();
    let missing: Vec<usize> = (0..n).filter(|&i| values[i].is_none()).collect();
    if missing.is_empty() {
        return Ok(values.iter().flatten().copied().collect());
    }

    let contiguous = missing.windows(2).all(|w| w[1] == w[0] + 1);
    let first = missing[0];
    let last = *missing.last().unwrap();
    let leading = first == 0;
    let trailing = last == n - 1;

    if !contiguous {
        let edge_blocks = leading || trailing;
        return Err(Error::Rejected(if edge_blocks {
            RejectReason::MultipleBlocks
        } else {
            RejectReason::InteriorMissing
        }));
    }
    if !leading && !trailing {
        return Err(Error::Rejected(RejectReason::InteriorMissing));
    }
    if missing.len() as f64 >= max_fraction * n as f64 {
        return Err(Error::Rejected(RejectReason::TooMuchMissing));
    }
    Ok(values.iter().flatten().copied().collect())
}
