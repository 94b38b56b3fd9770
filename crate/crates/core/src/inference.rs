//! Which individual features separate the labeled groups: permutation
//! significance of single-feature classification, Benjamini–Hochberg FDR
//! control, and the correlation structure among the top-ranked features.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::learn::lda_in_sample_balanced_accuracy;
use crate::stats;

pub const DEFAULT_N_PERM: usize = 1000;
pub const DEFAULT_Q_LEVEL: f64 = 0.05;
pub const DEFAULT_TOP_K: usize = 40;

/// Relative slack on the q ≤ level comparison so that q-values landing on
/// the threshold exactly in real arithmetic (3·0.1/3 vs 0.1) stay significant.
pub const BH_THRESHOLD_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PermutationResult {
    pub observed_stat: f64,
    pub p_value: f64,
}

fn check_classes(labels: &[usize], n_classes: usize) -> Result<()> {
    if n_classes < 2 {
        return Err(Error::MissingClass("need at least two classes".into()));
    }
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        if l >= n_classes {
            return Err(Error::InvalidArgument(format!("label {l} out of range")));
        }
        counts[l] += 1;
    }
    if let Some(c) = counts.iter().position(|&c| c < 2) {
        return Err(Error::Degenerate(format!("class {c} has fewer than two members")));
    }
    Ok(())
}

/// Permutation p-value for the in-sample single-feature LDA balanced
/// accuracy. Label shuffles come from a ChaCha stream keyed by `seed` and
/// `stream`, so each feature's result is independent of scheduling.
/// p = (1 + #{permuted ≥ observed}) / (1 + n_perm).
pub fn permutation_test(
    column: &[f64],
    labels: &[usize],
    n_classes: usize,
    n_perm: usize,
    seed: u64,
    stream: u64,
) -> Result<PermutationResult> {
    if column.len() != labels.len() {
        return Err(Error::InvalidArgument("column and labels must align".into()));
    }
    check_classes(labels, n_classes)?;
    if column.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotFinite);
    }
    let observed = lda_in_sample_balanced_accuracy(column, labels, n_classes);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut shuffled = labels.to_vec();
    let mut hits = 0usize;
    for _ in 0..n_perm {
        shuffled.shuffle(&mut rng);
        if lda_in_sample_balanced_accuracy(column, &shuffled, n_classes) >= observed {
            hits += 1;
        }
    }
    Ok(PermutationResult {
        observed_stat: observed,
        p_value: (1 + hits) as f64 / (1 + n_perm) as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdrResult {
    pub q_values: Vec<f64>,
    pub significant: Vec<bool>,
}

/// Benjamini–Hochberg adjusted p-values (q_(i) = min_{j ≥ i} n·p_(j)/j,
/// capped at 1) and significance at `q_level`.
pub fn bh_fdr(p_values: &[f64], q_level: f64) -> FdrResult {
    let n = p_values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut q = vec![0.0; n];
    let mut running = 1.0f64;
    for rank in (0..n).rev() {
        let i = order[rank];
        // p·(n/j) rather than n·p/j: n/j ≥ 1 exactly, so q ≥ p survives rounding
        running = running.min(p_values[i] * (n as f64 / (rank + 1) as f64));
        q[i] = running;
    }
    let threshold = q_level * (1.0 + BH_THRESHOLD_REL_TOL);
    let significant = q.iter().map(|&v| v <= threshold).collect();
    FdrResult {
        q_values: q,
        significant,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub class: String,
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub feature_id: String,
    /// Column in the matrix that was ranked.
    pub column: usize,
    pub observed_stat: f64,
    pub p_value: f64,
    pub q_value: f64,
    pub significant: bool,
    pub class_summaries: Vec<ClassSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    pub classes: Vec<String>,
    pub n_perm: usize,
    pub seed: u64,
    pub q_level: f64,
    pub n_significant: usize,
    /// Best first: observed statistic descending, then feature id.
    pub features: Vec<RankedFeature>,
}

fn summarize(values: &[f64], labels: &[usize], classes: &[String]) -> Vec<ClassSummary> {
    classes
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let v: Vec<f64> = values
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == c)
                .map(|(x, _)| *x)
                .collect();
            let s = stats::sorted(&v);
            ClassSummary {
                class: name.clone(),
                n: v.len(),
                min: s[0],
                q1: stats::quantile_sorted(&s, 0.25),
                median: stats::quantile_sorted(&s, 0.5),
                q3: stats::quantile_sorted(&s, 0.75),
                max: s[s.len() - 1],
                mean: stats::mean(&v),
            }
        })
        .collect()
}

/// Permutation-tests every column on its raw values (column index is the
/// RNG stream), FDR-corrects across columns, and orders the result.
pub fn rank_features(
    matrix: &FeatureMatrix,
    labels: &[usize],
    classes: &[String],
    n_perm: usize,
    seed: u64,
    q_level: f64,
) -> Result<RankingResult> {
    if labels.len() != matrix.n_rows() {
        return Err(Error::InvalidArgument("one label per matrix row required".into()));
    }
    if classes.len() < 2 {
        return Err(Error::MissingClass(
            "ranking needs at least two classes".into(),
        ));
    }
    check_classes(labels, classes.len())?;
    let tests: Vec<Result<PermutationResult>> = (0..matrix.n_cols())
        .into_par_iter()
        .map(|c| permutation_test(&matrix.column(c), labels, classes.len(), n_perm, seed, c as u64))
        .collect();
    let tests: Vec<PermutationResult> = tests.into_iter().collect::<Result<_>>()?;
    let p: Vec<f64> = tests.iter().map(|t| t.p_value).collect();
    let fdr = bh_fdr(&p, q_level);

    let mut features: Vec<RankedFeature> = tests
        .iter()
        .enumerate()
        .map(|(c, t)| RankedFeature {
            feature_id: matrix.feature_ids[c].clone(),
            column: c,
            observed_stat: t.observed_stat,
            p_value: t.p_value,
            q_value: fdr.q_values[c],
            significant: fdr.significant[c],
            class_summaries: summarize(&matrix.column(c), labels, classes),
        })
        .collect();
    features.sort_by(|a, b| {
        b.observed_stat
            .total_cmp(&a.observed_stat)
            .then_with(|| a.feature_id.cmp(&b.feature_id))
    });
    Ok(RankingResult {
        classes: classes.to_vec(),
        n_perm,
        seed,
        q_level,
        n_significant: fdr.significant.iter().filter(|&&s| s).count(),
        features,
    })
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    stats::pearson(&stats::average_ranks(x), &stats::average_ranks(y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCluster {
    pub feature_ids: Vec<String>,
    /// |Spearman ρ| between the selected features, in ranking order.
    pub abs_correlation: Vec<Vec<f64>>,
    /// Dendrogram leaf order, as indices into `feature_ids`.
    pub leaf_order: Vec<usize>,
}

impl CorrelationCluster {
    pub fn ordered_ids(&self) -> Vec<&str> {
        self.leaf_order.iter().map(|&i| self.feature_ids[i].as_str()).collect()
    }
}

/// Average-linkage agglomerative clustering on `distance`; returns the
/// leaf order of the final dendrogram. Equal distances merge the pair with
/// the smallest member indices first, and each merge lists the child holding
/// the smaller leaf index first.
pub fn average_linkage_order(distance: &[Vec<f64>]) -> Vec<usize> {
    let n = distance.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let avg = |a: &[usize], b: &[usize]| {
        let s: f64 = a.iter().flat_map(|&i| b.iter().map(move |&j| distance[i][j])).sum();
        s / (a.len() * b.len()) as f64
    };
    while clusters.len() > 1 {
        let mut best = (0, 1, f64::INFINITY);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let d = avg(&clusters[a], &clusters[b]);
                if d < best.2 {
                    best = (a, b, d);
                }
            }
        }
        let (a, b, _) = best;
        let right = clusters.remove(b);
        let left = std::mem::take(&mut clusters[a]);
        let (first, second) = if left.iter().min() <= right.iter().min() {
            (left, right)
        } else {
            (right, left)
        };
        clusters[a] = first.into_iter().chain(second).collect();
    }
    clusters.pop().unwrap_or_default()
}

/// Absolute Spearman correlations among the `top_k` best-ranked features
/// and their average-linkage leaf ordering on 1 − |ρ|.
pub fn correlation_cluster(
    matrix: &FeatureMatrix,
    ranking: &RankingResult,
    top_k: usize,
) -> Result<CorrelationCluster> {
    if top_k == 0 || top_k > ranking.features.len() {
        return Err(Error::InvalidArgument(format!(
            "top_k = {top_k} with {} ranked features",
            ranking.features.len()
        )));
    }
    let selected = &ranking.features[..top_k];
    let columns: Vec<Vec<f64>> = selected
        .iter()
        .map(|f| {
            matrix
                .column_index(&f.feature_id)
                .map(|c| matrix.column(c))
                .ok_or_else(|| Error::InvalidArgument(format!("`{}` not in matrix", f.feature_id)))
        })
        .collect::<Result<_>>()?;
    if let Some(f) = columns.iter().position(|c| c.windows(2).all(|w| w[0] == w[1])) {
        return Err(Error::Degenerate(format!("`{}` is constant", selected[f].feature_id)));
    }
    let mut corr = vec![vec![1.0; top_k]; top_k];
    for i in 0..top_k {
        for j in i + 1..top_k {
            let r = spearman(&columns[i], &columns[j]).abs().min(1.0);
            corr[i][j] = r;
            corr[j][i] = r;
        }
    }
    let distance: Vec<Vec<f64>> = corr.iter().map(|row| row.iter().map(|r| 1.0 - r).collect()).collect();
    Ok(CorrelationCluster {
        feature_ids: selected.iter().map(|f| f.feature_id.clone()).collect(),
        leaf_order: average_linkage_order(&distance),
        abs_correlation: corr,
    })
}
