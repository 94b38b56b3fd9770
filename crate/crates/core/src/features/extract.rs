use rayon::prelude::*;

use super::catalog::{run_extractor, FeatureCatalog, FeatureSpec};
use super::values::NamedValues;
use crate::error::{Error, Result};
use crate::series::{Dataset, QualityCode};

/// Series × feature values with a quality code per cell. Cells whose code
/// is not `Ok` hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub series_ids: Vec<String>,
    pub feature_ids: Vec<String>,
    values: Vec<f64>,
    quality: Vec<QualityCode>,
}

impl FeatureMatrix {
    /// Assembles a matrix from row-major cells, enforcing that a value is
    /// finite exactly when its code is `Ok`.
    pub fn from_cells(
        series_ids: Vec<String>,
        feature_ids: Vec<String>,
        cells: Vec<(f64, QualityCode)>,
    ) -> Result<Self> {
        if cells.len() != series_ids.len() * feature_ids.len() {
            return Err(Error::InvalidArgument(format!(
                "{} cells for a {}x{} matrix",
                cells.len(),
                series_ids.len(),
                feature_ids.len()
            )));
        }
        let (values, quality) = cells
            .into_iter()
            .map(|(v, q)| match (q, v.is_finite()) {
                (QualityCode::Ok, true) => (v, q),
                (QualityCode::Ok, false) => (f64::NAN, QualityCode::NotFinite),
                (_, _) => (f64::NAN, q),
            })
            .unzip();
        Ok(FeatureMatrix {
            series_ids,
            feature_ids,
            values,
            quality,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.series_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.feature_ids.len()
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols() + col]
    }

    pub fn quality(&self, row: usize, col: usize) -> QualityCode {
        self.quality[row * self.n_cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.n_cols();
        &self.values[row * c..(row + 1) * c]
    }

    pub fn quality_row(&self, row: usize) -> &[QualityCode] {
        let c = self.n_cols();
        &self.quality[row * c..(row + 1) * c]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|r| self.value(r, col)).collect()
    }

    pub fn column_quality(&self, col: usize) -> Vec<QualityCode> {
        (0..self.n_rows()).map(|r| self.quality(r, col)).collect()
    }

    pub fn column_index(&self, feature_id: &str) -> Option<usize> {
        self.feature_ids.iter().position(|f| f == feature_id)
    }

    /// Copy restricted to the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FeatureMatrix {
        let mut cells = Vec::with_capacity(self.n_rows() * cols.len());
        for r in 0..self.n_rows() {
            cells.extend(cols.iter().map(|&c| (self.value(r, c), self.quality(r, c))));
        }
        FeatureMatrix::from_cells(
            self.series_ids.clone(),
            cols.iter().map(|&c| self.feature_ids[c].clone()).collect(),
            cells,
        )
        .expect("shape preserved")
    }

    /// Copy restricted to the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let mut cells = Vec::with_capacity(rows.len() * self.n_cols());
        for &r in rows {
            cells.extend(self.row(r).iter().copied().zip(self.quality_row(r).iter().copied()));
        }
        FeatureMatrix::from_cells(
            rows.iter().map(|&r| self.series_ids[r].clone()).collect(),
            self.feature_ids.clone(),
            cells,
        )
        .expect("shape preserved")
    }

    /// Rows as owned vectors, for the learning routines.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows()).map(|r| self.row(r).to_vec()).collect()
    }
}

fn cell(spec: &FeatureSpec, x: &[f64], outputs: &Result<NamedValues>) -> (f64, QualityCode) {
    if x.len() < spec.min_length {
        return (f64::NAN, QualityCode::TooShort);
    }
    match outputs {
        Err(e) => (f64::NAN, QualityCode::from(e)),
        Ok(named) => match named.get(spec.output_name()) {
            Some(Ok(v)) if v.is_finite() => (*v, QualityCode::Ok),
            Some(Ok(_)) => (f64::NAN, QualityCode::NotFinite),
            Some(Err(e)) => (f64::NAN, QualityCode::from(e)),
            None => unreachable!("catalog validated output names"),
        },
    }
}

/// Every catalog feature for one series. Extractors shared by several
/// columns (same family and parameters) run once.
pub fn extract_series(x: &[f64], catalog: &FeatureCatalog) -> Vec<(f64, QualityCode)> {
    let mut memo: Vec<(usize, Result<NamedValues>)> = Vec::new();
    catalog
        .specs()
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let params = catalog.params(i);
            let pos = memo.iter().position(|(j, _)| {
                let other = &catalog.specs()[*j];
                other.family == spec.family && catalog.params(*j) == params
            });
            let pos = pos.unwrap_or_else(|| {
                memo.push((i, run_extractor(spec.family, params, x)));
                memo.len() - 1
            });
            cell(spec, x, &memo[pos].1)
        })
        .collect()
}

/// Fills the feature matrix for a dataset. Failures become quality codes;
/// the batch itself never fails. Rows are computed in parallel on the
/// current rayon pool, and the result does not depend on its size.
pub fn extract_all(dataset: &Dataset, catalog: &FeatureCatalog) -> FeatureMatrix {
    let rows: Vec<Vec<(f64, QualityCode)>> = dataset
        .series()
        .par_iter()
        .map(|s| extract_series(&s.values, catalog))
        .collect();
    FeatureMatrix::from_cells(
        dataset.series().iter().map(|s| s.id.clone()).collect(),
        catalog.feature_ids(),
        rows.into_iter().flatten().collect(),
    )
    .expect("one cell per catalog entry")
}
