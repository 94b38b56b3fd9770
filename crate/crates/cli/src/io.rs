//! Text formats: series and label CSVs in, matrices and reports out.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};
use tsphen_core::{FeatureMatrix, QualityCode};

use crate::error::{CliError, Result};

pub const LABELS_HEADER: [&str; 2] = ["series_id", "label"];
pub const LONG_HEADER: [&str; 3] = ["series_id", "t_index", "value"];

/// A parsed series with its missing cells, or why it could not be read.
pub type ParsedSeries = std::result::Result<Vec<Option<f64>>, String>;

fn parse_cell(field: &str) -> std::result::Result<Option<f64>, String> {
    let f = field.trim();
    if f.is_empty() {
        return Ok(None);
    }
    match f.parse::<f64>() {
        Ok(v) if v.is_nan() => Ok(None),
        Ok(v) => Ok(Some(v)),
        Err(_) => Err(format!("`{f}` is not a number")),
    }
}

fn reader(text: &str, headers: bool) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(headers)
        .flexible(true)
        .from_reader(text.as_bytes())
}

/// One value per line, optionally under a header line. Empty fields and
/// `NaN` are missing. Errors describe the first malformed line.
pub fn parse_series_column(text: &str) -> ParsedSeries {
    // line-based rather than via the csv reader, which drops blank lines
    // that here stand for missing values
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let mut values = Vec::new();
    for (i, line) in body.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.contains(',') {
            return Err(format!("line {}: expected one column", i + 1));
        }
        let field = line.trim().trim_matches('"');
        match parse_cell(field) {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => {} // header
            Err(e) => return Err(format!("line {}: {e}", i + 1)),
        }
    }
    Ok(values)
}

fn check_header(found: &csv::StringRecord, expected: &[&str], what: &str) -> Result<()> {
    let found: Vec<&str> = found.iter().map(str::trim).collect();
    if found != expected {
        return Err(CliError::Input(format!(
            "{what}: header must be `{}`, found `{}`",
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

/// `series_id,label` rows; a repeated id or an empty field is an error.
pub fn parse_labels(text: &str) -> Result<BTreeMap<String, String>> {
    let mut rdr = reader(text, true);
    let header = rdr.headers().map_err(|e| CliError::Input(format!("labels: {e}")))?.clone();
    check_header(&header, &LABELS_HEADER, "labels")?;
    let mut labels = BTreeMap::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| CliError::Input(format!("labels line {line}: {e}")))?;
        if record.len() != 2 {
            return Err(CliError::Input(format!("labels line {line}: expected 2 fields")));
        }
        let (id, label) = (record[0].trim(), record[1].trim());
        if id.is_empty() || label.is_empty() {
            return Err(CliError::Input(format!("labels line {line}: empty field")));
        }
        if labels.insert(id.to_string(), label.to_string()).is_some() {
            return Err(CliError::Input(format!("labels: duplicate series id `{id}`")));
        }
    }
    Ok(labels)
}

/// Series from a long-format table. A malformed row only invalidates its
/// own series; a bad header or unreadable record fails the file.
pub fn parse_long_format(
    text: &str,
) -> Result<BTreeMap<String, ParsedSeries>> {
    let mut rdr = reader(text, true);
    let header = rdr.headers().map_err(|e| CliError::Input(format!("long format: {e}")))?.clone();
    check_header(&header, &LONG_HEADER, "long format")?;
    let mut series: BTreeMap<String, ParsedSeries> = BTreeMap::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| CliError::Input(format!("long format line {line}: {e}")))?;
        let id = record.get(0).unwrap_or("").trim();
        if id.is_empty() {
            return Err(CliError::Input(format!("long format line {line}: missing series_id")));
        }
        let entry = series.entry(id.to_string()).or_insert_with(|| Ok(Vec::new()));
        let Ok(values) = entry else { continue };
        let outcome = if record.len() != 3 {
            Err(format!("line {line}: expected 3 fields"))
        } else {
            match record[1].trim().parse::<usize>() {
                Ok(t) if t == values.len() => parse_cell(&record[2]).map_err(|e| format!("line {line}: {e}")),
                Ok(t) => Err(format!("line {line}: t_index {t} where {} was expected", values.len())),
                Err(_) => Err(format!("line {line}: bad t_index `{}`", record[1].trim())),
            }
        };
        match outcome {
            Ok(v) => values.push(v),
            Err(e) => *entry = Err(e),
        }
    }
    Ok(series)
}

fn format_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "NaN".to_string()
    }
}

fn write_csv(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// `features.csv` and `quality.csv` contents. Values carry 17 significant
/// digits, so reading them back is exact; cells that are not OK read `NaN`.
pub fn feature_matrix_csv(matrix: &FeatureMatrix) -> (String, String) {
    let header: Vec<String> = std::iter::once("series_id".to_string())
        .chain(matrix.feature_ids.iter().cloned())
        .collect();
    let values = (0..matrix.n_rows()).map(|r| {
        std::iter::once(matrix.series_ids[r].clone())
            .chain(
                matrix.row(r)
                    .iter()
                    .zip(matrix.quality_row(r))
                    .map(|(&v, q)| if q.is_ok() { format_value(v) } else { "NaN".into() }),
            )
            .collect()
    });
    let quality = (0..matrix.n_rows()).map(|r| {
        std::iter::once(matrix.series_ids[r].clone())
            .chain(matrix.quality_row(r).iter().map(|q| q.as_str().to_string()))
            .collect()
    });
    (write_csv(header.clone(), values), write_csv(header, quality))
}

fn read_table(text: &str, what: &str) -> Result<(Vec<String>, Vec<(String, Vec<String>)>)> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| CliError::Input(format!("{what}: {e}")))?.clone();
    if header.get(0) != Some("series_id") {
        return Err(CliError::Input(format!("{what}: first column must be series_id")));
    }
    let ids = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::Input(format!("{what}: {e}")))?;
        rows.push((record[0].to_string(), record.iter().skip(1).map(str::to_string).collect()));
    }
    Ok((ids, rows))
}

/// Rebuilds a matrix from the two files written by [`feature_matrix_csv`].
pub fn read_feature_matrix(features: &str, quality: &str) -> Result<FeatureMatrix> {
    let (fids, frows) = read_table(features, "features.csv")?;
    let (qids, qrows) = read_table(quality, "quality.csv")?;
    if fids != qids || frows.len() != qrows.len() {
        return Err(CliError::Input("features.csv and quality.csv differ in shape".into()));
    }
    let mut cells = Vec::with_capacity(frows.len() * fids.len());
    for ((fid, fv), (qid, qv)) in frows.iter().zip(&qrows) {
        if fid != qid {
            return Err(CliError::Input(format!("row mismatch: `{fid}` vs `{qid}`")));
        }
        for (v, q) in fv.iter().zip(qv) {
            let q: QualityCode = q
                .parse()
                .map_err(|_| CliError::Input(format!("quality.csv: unknown code `{q}`")))?;
            let v = if v == "NaN" {
                f64::NAN
            } else {
                v.parse()
                    .map_err(|_| CliError::Input(format!("features.csv: bad value `{v}`")))?
            };
            cells.push((v, q));
        }
    }
    FeatureMatrix::from_cells(frows.into_iter().map(|r| r.0).collect(), fids, cells)
        .map_err(|e| CliError::Input(format!("feature matrix: {e}")))
}

pub fn labels_csv(labels: &[(String, String)]) -> String {
    write_csv(
        LABELS_HEADER.iter().map(|s| s.to_string()).collect(),
        labels.iter().map(|(a, b)| vec![a.clone(), b.clone()]),
    )
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Writes the whole file under a temporary name and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    let result = std::fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents)?;
            f.sync_all()
        })
        .and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Writes an arbitrary table to CSV text.
pub fn table_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    write_csv(header.iter().map(|s| s.to_string()).collect(), rows)
}

pub fn fmt_f64(v: f64) -> String {
    format_value(v)
}
