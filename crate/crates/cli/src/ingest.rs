//! Dataset ingestion from a series directory or a long-format CSV.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsphen_core::series::DEFAULT_MAX_MISSING_FRACTION;
use tsphen_core::{trim_missing, Dataset, Error as CoreError, TimeSeries};

use crate::error::{CliError, Result};
use crate::io::{parse_labels, ParsedSeries, parse_long_format, parse_series_column, read_text};

pub const LABELS_FILE: &str = "labels.csv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub series_id: String,
    /// `interior_missing`, `too_much_missing`, `multiple_blocks`, `empty` or
    /// `malformed`.
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    /// Accepted series in lexicographic id order.
    pub dataset: Dataset,
    pub rejected: Vec<Rejection>,
    /// Accepted series without a label.
    pub unlabeled: Vec<String>,
    /// Every file that was read, in a fixed order.
    pub files: Vec<PathBuf>,
}

impl Ingested {
    pub fn labels(&self) -> Vec<(String, String)> {
        self.dataset
            .series()
            .iter()
            .filter_map(|s| s.label.clone().map(|l| (s.id.clone(), l)))
            .collect()
    }
}

type Raw = BTreeMap<String, ParsedSeries>;

fn read_directory(dir: &Path, labels_path: &Path, files: &mut Vec<PathBuf>) -> Result<Raw> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| CliError::io(dir, e)))
        .collect::<Result<_>>()?;
    paths.sort();
    let mut raw = Raw::new();
    for path in paths {
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if !path.is_file() || !is_csv || path == labels_path {
            continue;
        }
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| CliError::Input(format!("{}: file name is not UTF-8", path.display())))?
            .to_string();
        let text = read_text(&path)?;
        files.push(path.clone());
        if raw.insert(id.clone(), parse_series_column(&text)).is_some() {
            return Err(CliError::Input(format!("duplicate series id `{id}`")));
        }
    }
    Ok(raw)
}

fn rejection(series_id: &str, reason: impl Into<String>, detail: Option<String>) -> Rejection {
    Rejection {
        series_id: series_id.to_string(),
        reason: reason.into(),
        detail,
    }
}

/// Reads every series, trims edge gaps shorter than 15% of the recording,
/// rejects the rest with a reason, and attaches labels. Series ids are file
/// stems (directory input) or the `series_id` column (long format).
pub fn ingest(input: &Path, labels: Option<&Path>) -> Result<Ingested> {
    let mut files = Vec::new();
    let (raw, default_labels) = if input.is_dir() {
        let labels_path = input.join(LABELS_FILE);
        (read_directory(input, &labels_path, &mut files)?, Some(labels_path))
    } else {
        let text = read_text(input)?;
        files.push(input.to_path_buf());
        (parse_long_format(&text)?, None)
    };

    let labels_path = labels.map(Path::to_path_buf).or(default_labels);
    let labels = match &labels_path {
        Some(p) if labels.is_some() || p.exists() => {
            files.push(p.clone());
            parse_labels(&read_text(p)?)?
        }
        _ => BTreeMap::new(),
    };
    for id in labels.keys() {
        let bare = id.strip_suffix(".csv").unwrap_or(id);
        if !raw.contains_key(id) && !raw.contains_key(bare) {
            return Err(CliError::Input(format!("labels name series `{id}`, which is not in the input")));
        }
    }
    let label_of = |id: &str| {
        labels
            .get(id)
            .or_else(|| labels.get(&format!("{id}.csv")))
            .cloned()
    };

    let mut series = Vec::new();
    let mut rejected = Vec::new();
    let mut unlabeled = Vec::new();
    for (id, parsed) in raw {
        let values = match parsed {
            Err(e) => {
                rejected.push(rejection(&id, "malformed", Some(e)));
                continue;
            }
            Ok(v) => v,
        };
        let values = match trim_missing(&values, DEFAULT_MAX_MISSING_FRACTION) {
            Ok(v) if v.is_empty() => {
                rejected.push(rejection(&id, "empty", None));
                continue;
            }
            Ok(v) => v,
            Err(CoreError::Rejected(r)) => {
                rejected.push(rejection(&id, r.to_string(), None));
                continue;
            }
            Err(e) => return Err(CliError::Input(format!("series `{id}`: {e}"))),
        };
        let mut ts = TimeSeries::new(id.clone(), values);
        match label_of(&id) {
            Some(l) => ts = ts.with_label(l),
            None => unlabeled.push(id),
        }
        series.push(ts);
    }
    Ok(Ingested {
        dataset: Dataset::new(series),
        rejected,
        unlabeled,
        files,
    })
}
