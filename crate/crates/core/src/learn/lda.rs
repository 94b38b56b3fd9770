use crate::error::{Error, Result};

fn class_means(values: &[f64], labels: &[usize], n_classes: usize) -> Vec<Option<f64>> {
    let mut sum = vec![0.0; n_classes];
    let mut count = vec![0usize; n_classes];
    for (&v, &l) in values.iter().zip(labels) {
        sum[l] += v;
        count[l] += 1;
    }
    sum.iter()
        .zip(&count)
        .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
        .collect()
}

fn nearest(means: &[Option<f64>], x: f64) -> usize {
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    for (i, mu) in means.iter().enumerate() {
        if let Some(mu) = mu {
            let score = -(x - mu) * (x - mu);
            if score > best.1 {
                best = (i, score);
            }
        }
    }
    best.0
}

/// Nearest-class-mean rule, which is what one-dimensional LDA with pooled
/// variance and equal priors reduces to. Needs no variance, so it stays
/// defined on constant features.
pub fn nearest_mean_predict(
    train_values: &[f64],
    train_labels: &[usize],
    n_classes: usize,
    test_values: &[f64],
) -> Vec<usize> {
    let means = class_means(train_values, train_labels, n_classes);
    test_values.iter().map(|&x| nearest(&means, x)).collect()
}

/// One-feature linear discriminant analysis: Gaussian classes with their own
/// means, a pooled variance and equal priors.
pub fn lda_single_feature(
    train_values: &[f64],
    train_labels: &[usize],
    n_classes: usize,
    test_values: &[f64],
) -> Result<Vec<usize>> {
    let means = class_means(train_values, train_labels, n_classes);
    let present = means.iter().flatten().count();
    if present < 2 {
        return Err(Error::Degenerate("LDA needs at least two classes in training".into()));
    }
    let dof = train_values.len().saturating_sub(present);
    let ss: f64 = train_values
        .iter()
        .zip(train_labels)
        .map(|(&v, &l)| (v - means[l].unwrap()).powi(2))
        .sum();
    if dof == 0 || !(ss / dof as f64 > 0.0) {
        return Err(Error::Degenerate("pooled within-class variance is zero".into()));
    }
    Ok(test_values.iter().map(|&x| nearest(&means, x)).collect())
}

/// Balanced accuracy of single-feature LDA trained and evaluated on the same
/// observations. Every class in `0..n_classes` must be present.
pub fn lda_in_sample_balanced_accuracy(values: &[f64], labels: &[usize], n_classes: usize) -> f64 {
    let means = class_means(values, labels, n_classes);
    let mut correct = vec![0usize; n_classes];
    let mut total = vec![0usize; n_classes];
    for (&x, &l) in values.iter().zip(labels) {
        total[l] += 1;
        if nearest(&means, x) == l {
            correct[l] += 1;
        }
    }
    correct
        .iter()
        .zip(&total)
        .map(|(&t, &c)| t as f64 / c as f64)
        .sum::<f64>()
        / n_classes as f64
}
