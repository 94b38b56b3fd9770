use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Singular values below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaProjection {
    /// One row per observation, one column per component.
    pub scores: Vec<Vec<f64>>,
    /// One unit vector per component, in feature space.
    pub loadings: Vec<Vec<f64>>,
    pub variance_explained: Vec<f64>,
    pub column_means: Vec<f64>,
}

/// Principal components from the SVD of the column-centered matrix. Each
/// loading is signed so that its largest-magnitude entry is positive.
pub fn pca(rows: &[Vec<f64>], n_components: usize) -> Result<PcaProjection> {
    let n = rows.len();
    let p = rows.first().map_or(0, Vec::len);
    if n < 2 || p < n_components || n_components == 0 {
        return Err(Error::InvalidArgument(format!(
            "PCA of a {n}x{p} matrix into {n_components} components"
        )));
    }
    let means: Vec<f64> = (0..p)
        .map(|c| rows.iter().map(|r| r[c]).sum::<f64>() / n as f64)
        .collect();
    let centered = DMatrix::from_fn(n, p, |i, j| rows[i][j] - means[j]);
    let svd = centered.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let top = sv.first().copied().unwrap_or(0.0);
    let nonzero = sv.iter().filter(|&&s| s > RANK_TOL * top).count();
    if top == 0.0 || nonzero < n_components {
        return Err(Error::RankDeficient {
            requested: n_components,
            found: if top == 0.0 { 0 } else { nonzero },
        });
    }
    let total: f64 = sv.iter().map(|s| s * s).sum();

    let loadings: Vec<Vec<f64>> = order[..n_components]
        .iter()
        .map(|&i| {
            let mut v: Vec<f64> = v_t.row(i).iter().copied().collect();
            let lead = (0..p).fold(0, |b, j| if v[j].abs() > v[b].abs() { j } else { b });
            if v[lead] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        })
        .collect();
    let scores = (0..n)
        .map(|i| {
            loadings
                .iter()
                .map(|v| (0..p).map(|j| centered[(i, j)] * v[j]).sum())
                .collect()
        })
        .collect();
    Ok(PcaProjection {
        scores,
        loadings,
        variance_explained: sv[..n_components].iter().map(|s| s * s / total).collect(),
        column_means: means,
    })
}
