use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linear::{fit_weighted_linear, LinearConfig, LinearModel};
use super::metrics::{balanced_accuracy, confusion_matrix};
use crate::error::{Error, Result};
use crate::quality::SigmoidScaler;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub seed: u64,
    /// Fold of each observation.
    pub folds: Vec<usize>,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] != fold).collect()
    }
}

/// Shuffles each class's members with a generator seeded by `seed` and deals
/// them round-robin into `k` folds. The dealing position carries over from
/// one class to the next so fold sizes stay within one of each other.
pub fn stratified_kfold(labels: &[usize], classes: &[String], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    for (c, m) in members.iter().enumerate() {
        if m.len() < k {
            return Err(Error::ClassTooSmall {
                class: classes[c].clone(),
                count: m.len(),
                k,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; labels.len()];
    let mut next = 0;
    for mut m in members {
        m.shuffle(&mut rng);
        for i in m {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(FoldAssignment { k, seed, folds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub k: usize,
    pub seed: u64,
    pub linear: LinearConfig,
    /// Refit the scaled robust sigmoid on each training fold. When false the
    /// rows are taken as already normalized.
    pub fold_normalization: bool,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            k: 10,
            seed: 42,
            linear: LinearConfig::default(),
            fold_normalization: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPrediction {
    pub index: usize,
    pub actual: usize,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub classes: Vec<String>,
    pub k: usize,
    pub seed: u64,
    pub fold_predictions: Vec<Vec<FoldPrediction>>,
    pub fold_balanced_accuracy: Vec<f64>,
    pub mean_balanced_accuracy: f64,
    pub chance_level: f64,
    /// Pooled over folds; actual class along rows.
    pub confusion: Vec<Vec<usize>>,
    pub fold_converged: Vec<bool>,
}

fn take(rows: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| rows[i].clone()).collect()
}

/// Trains on every fold except `fold`; only those rows reach the fitting
/// routine. Returns the model together with the held-out rows transformed
/// the same way the training rows were.
pub fn fold_model(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    folds: &FoldAssignment,
    fold: usize,
    config: &CvConfig,
) -> Result<(LinearModel, Vec<Vec<f64>>)> {
    let train_idx = folds.train_indices(fold);
    let test_idx = folds.test_indices(fold);
    let mut train = take(rows, &train_idx);
    let mut test = take(rows, &test_idx);
    if config.fold_normalization {
        let d = train.first().map_or(0, Vec::len);
        let columns: Vec<Vec<f64>> = (0..d).map(|c| train.iter().map(|r| r[c]).collect()).collect();
        let scaler = SigmoidScaler::fit(&columns);
        train = train.iter().map(|r| scaler.transform_row(r)).collect();
        test = test.iter().map(|r| scaler.transform_row(r)).collect();
    }
    let train_labels: Vec<usize> = train_idx.iter().map(|&i| labels[i]).collect();
    let model = fit_weighted_linear(&train, &train_labels, n_classes, &config.linear)?;
    Ok((model, test))
}

/// Stratified k-fold cross-validation of the class-weighted linear model.
pub fn cross_validate(
    rows: &[Vec<f64>],
    labels: &[usize],
    classes: &[String],
    config: &CvConfig,
) -> Result<ClassifierReport> {
    if rows.len() != labels.len() {
        return Err(Error::InvalidArgument("rows and labels must align".into()));
    }
    if classes.len() < 2 {
        return Err(Error::MissingClass(
            "cross-validation needs at least two classes".into(),
        ));
    }
    let folds = stratified_kfold(labels, classes, config.k, config.seed)?;
    let class_idx: Vec<usize> = (0..classes.len()).collect();

    let per_fold: Vec<Result<(Vec<FoldPrediction>, f64, bool)>> = (0..config.k)
        .into_par_iter()
        .map(|f| {
            let (model, test_rows) = fold_model(rows, labels, classes.len(), &folds, f, config)?;
            let preds: Vec<FoldPrediction> = folds
                .test_indices(f)
                .into_iter()
                .zip(&test_rows)
                .map(|(i, r)| FoldPrediction {
                    index: i,
                    actual: labels[i],
                    predicted: model.predict(r),
                })
                .collect();
            let p: Vec<usize> = preds.iter().map(|p| p.predicted).collect();
            let a: Vec<usize> = preds.iter().map(|p| p.actual).collect();
            let acc = balanced_accuracy(&p, &a, &class_idx)?;
            Ok((preds, acc, model.converged))
        })
        .collect();

    let mut report = ClassifierReport {
        classes: classes.to_vec(),
        k: config.k,
        seed: config.seed,
        fold_predictions: Vec::new(),
        fold_balanced_accuracy: Vec::new(),
        mean_balanced_accuracy: 0.0,
        chance_level: 1.0 / classes.len() as f64,
        confusion: vec![vec![0; classes.len()]; classes.len()],
        fold_converged: Vec::new(),
    };
    for r in per_fold {
        let (preds, acc, converged) = r?;
        report.fold_predictions.push(preds);
        report.fold_balanced_accuracy.push(acc);
        report.fold_converged.push(converged);
    }
    report.mean_balanced_accuracy =
        report.fold_balanced_accuracy.iter().sum::<f64>() / config.k as f64;
    let all: Vec<&FoldPrediction> = report.fold_predictions.iter().flatten().collect();
    report.confusion = confusion_matrix(
        &all.iter().map(|p| p.predicted).collect::<Vec<_>>(),
        &all.iter().map(|p| p.actual).collect::<Vec<_>>(),
        classes.len(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn names(m: usize) -> Vec<String> {
        (0..m).map(|c| format!("c{c}")).collect()
    }

    #[test]
    fn exact_divisibility() {
        let labels: Vec<usize> = (0..120).map(|i| if i < 100 { 0 } else { 1 }).collect();
        let f = stratified_kfold(&labels, &names(2), 10, 42).unwrap();
        for fold in 0..10 {
            let idx = f.test_indices(fold);
            assert_eq!(idx.iter().filter(|&&i| labels[i] == 0).count(), 10);
            assert_eq!(idx.iter().filter(|&&i| labels[i] == 1).count(), 2);
        }
    }

    #[test]
    fn small_class_fails_loudly() {
        let labels: Vec<usize> = (0..29).map(|i| if i < 20 { 0 } else { 1 }).collect();
        assert_eq!(
            stratified_kfold(&labels, &names(2), 10, 1),
            Err(Error::ClassTooSmall { class: "c1".into(), count: 9, k: 10 })
        );
    }

    #[test]
    fn seeded_determinism() {
        let labels: Vec<usize> = (0..57).map(|i| i % 3).collect();
        let a = stratified_kfold(&labels, &names(3), 5, 7).unwrap();
        let b = stratified_kfold(&labels, &names(3), 5, 7).unwrap();
        let c = stratified_kfold(&labels, &names(3), 5, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.folds, c.folds);
        let counts = |f: &FoldAssignment| -> Vec<Vec<usize>> {
            (0..5)
                .map(|k| (0..3).map(|cl| f.test_indices(k).iter().filter(|&&i| labels[i] == cl).count()).collect())
                .collect()
        };
        assert_eq!(counts(&a), counts(&c));
        // per-class counts within one of the global proportion
        for fold in counts(&a) {
            for n in fold {
                assert!((n as f64 - 19.0 / 5.0).abs() < 1.0);
            }
        }
    }

    #[test]
    fn test_rows_never_reach_training() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
        let rows: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.random(), rng.random()]).collect();
        let folds = stratified_kfold(&labels, &names(2), 4, 3).unwrap();
        for norm in [false, true] {
            let cfg = CvConfig { k: 4, fold_normalization: norm, ..Default::default() };
            let (base, _) = fold_model(&rows, &labels, 2, &folds, 0, &cfg).unwrap();
            let mut perturbed = rows.clone();
            for i in folds.test_indices(0) {
                perturbed[i] = vec![1e3, -1e3];
            }
            let (other, _) = fold_model(&perturbed, &labels, 2, &folds, 0, &cfg).unwrap();
            assert_eq!(base, other);
        }
    }

    #[test]
    fn separable_classes_cross_validate_perfectly() {
        let labels: Vec<usize> = (0..60).map(|i| i % 3).collect();
        let rows: Vec<Vec<f64>> = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let jitter = (i as f64 * 0.618).fract() * 0.05;
                let mut r = vec![0.1 + jitter; 3];
                r[l] = 0.9 - jitter;
                r
            })
            .collect();
        let report = cross_validate(&rows, &labels, &names(3), &CvConfig { k: 5, ..Default::default() }).unwrap();
        assert_eq!(report.mean_balanced_accuracy, 1.0);
        assert_eq!(report.chance_level, 1.0 / 3.0);
        for (c, row) in report.confusion.iter().enumerate() {
            assert_eq!(row.iter().sum::<usize>(), 20);
            assert_eq!(row[c], 20);
        }
    }
}
