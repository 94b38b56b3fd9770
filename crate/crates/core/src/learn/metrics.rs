use std::fmt::Display;

use crate::error::{Error, Result};

/// Mean over classes of the fraction of each class's examples predicted
/// correctly, so every class counts equally whatever its size.
pub fn balanced_accuracy<T: PartialEq + Display>(
    predicted: &[T],
    actual: &[T],
    classes: &[T],
) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::InvalidArgument(format!(
            "{} predictions for {} labels",
            predicted.len(),
            actual.len()
        )));
    }
    if classes.is_empty() {
        return Err(Error::InvalidArgument("no classes".into()));
    }
    let mut correct = vec![0usize; classes.len()];
    let mut total = vec![0usize; classes.len()];
    for (p, a) in predicted.iter().zip(actual) {
        let i = classes
            .iter()
            .position(|c| c == a)
            .ok_or_else(|| Error::InvalidArgument(format!("label `{a}` is not a known class")))?;
        total[i] += 1;
        if p == a {
            correct[i] += 1;
        }
    }
    if let Some(i) = total.iter().position(|&c| c == 0) {
        return Err(Error::MissingClass(classes[i].to_string()));
    }
    let sum: f64 = correct
        .iter()
        .zip(&total)
        .map(|(&t, &c)| t as f64 / c as f64)
        .sum();
    Ok(sum / classes.len() as f64)
}

/// Counts with actual class along rows and predicted class along columns.
pub fn confusion_matrix(predicted: &[usize], actual: &[usize], n_classes: usize) -> Vec<Vec<usize>> {
    let mut m = vec![vec![0; n_classes]; n_classes];
    for (&p, &a) in predicted.iter().zip(actual) {
        m[a][p] += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn perfect_predictions() {
        let y = ["a", "b", "b", "c"];
        assert_eq!(balanced_accuracy(&y, &y, &["a", "b", "c"]).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_case() {
        // class A: 2 of 4 right, class B: 3 of 3 right
        let actual = ["A", "A", "A", "A", "B", "B", "B"];
        let predicted = ["A", "A", "B", "B", "B", "B", "B"];
        assert_eq!(balanced_accuracy(&predicted, &actual, &["A", "B"]).unwrap(), 0.75);
    }

    #[test]
    fn missing_class() {
        let r = balanced_accuracy(&[0usize, 0], &[0, 0], &[0, 1]);
        assert_eq!(r, Err(Error::MissingClass("1".into())));
    }

    #[test]
    fn majority_vote_scores_chance() {
        let actual: Vec<usize> = (0..100).map(|i| if i < 70 { 0 } else { 1 + i % 4 }).collect();
        let predicted = vec![0usize; 100];
        assert_eq!(balanced_accuracy(&predicted, &actual, &[0, 1, 2, 3, 4]).unwrap(), 0.2);
    }

    #[test]
    fn relabeling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let actual: Vec<usize> = (0..60).map(|_| rng.random_range(0..3)).collect();
        let predicted: Vec<usize> = (0..60).map(|_| rng.random_range(0..3)).collect();
        let perm = [2usize, 0, 1];
        let pa: Vec<usize> = actual.iter().map(|&c| perm[c]).collect();
        let pp: Vec<usize> = predicted.iter().map(|&c| perm[c]).collect();
        let a = balanced_accuracy(&predicted, &actual, &[0, 1, 2]).unwrap();
        let b = balanced_accuracy(&pp, &pa, &[0, 1, 2]).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn confusion_rows_sum_to_class_counts() {
        let m = confusion_matrix(&[0, 1, 1, 0], &[0, 0, 1, 1], 2);
        assert_eq!(m, vec![vec![1, 1], vec![1, 1]]);
    }
}
