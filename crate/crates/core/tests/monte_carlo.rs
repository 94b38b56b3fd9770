mod common;

use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsphen_core::features::dfa::dfa_features;
use tsphen_core::features::entropy::multiscale_entropy;
use tsphen_core::inference::{permutation_test, rank_features, spearman};
use tsphen_core::learn::{balanced_accuracy, cross_validate, CvConfig};
use tsphen_core::{default_catalog, extract_all, Dataset, FeatureMatrix, QualityCode, TimeSeries};

fn alpha(x: &[f64]) -> f64 {
    dfa_features(x, 10, 4).unwrap().value("dfa_alpha").unwrap()
}

#[test]
fn dfa_recovers_known_exponents() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = alpha(&white_noise(&mut rng, 5000));
        assert!((a - 0.5).abs() <= 0.1, "white noise seed {seed}: {a}");
        let a = alpha(&random_walk(&mut rng, 5000));
        assert!((a - 1.5).abs() <= 0.15, "random walk seed {seed}: {a}");
    }
}

#[test]
fn noise_is_more_irregular_than_its_cumulative_sum() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let noise = white_noise(&mut rng, 2000);
        let walk: Vec<f64> = noise.iter().scan(0.0, |s, v| { *s += v; Some(*s) }).collect();
        let e = |x: &[f64]| multiscale_entropy(x, 2, 0.15, 3).unwrap().value("sampen_scale3").unwrap();
        assert!(e(&noise) > e(&walk), "seed {seed}");
    }
}

fn matrix_from_columns(cols: &[Vec<f64>]) -> FeatureMatrix {
    let n = cols[0].len();
    FeatureMatrix::from_cells(
        (0..n).map(|r| format!("s{r:03}")).collect(),
        (0..cols.len()).map(|c| format!("f{c:02}")).collect(),
        (0..n).flat_map(|r| cols.iter().map(move |c| (c[r], QualityCode::Ok))).collect(),
    )
    .unwrap()
}

#[test]
fn null_p_values_are_stochastically_at_least_uniform() {
    // 200 null replicates; the empirical CDF of p may exceed the uniform
    // CDF by no more than a one-sided KS margin (α ≈ 0.01: 1.52/√n)
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let labels: Vec<usize> = (0..16).map(|i| i % 2).collect();
    let mut p: Vec<f64> = (0..200)
        .map(|rep| {
            let col = white_noise(&mut rng, 16);
            permutation_test(&col, &labels, 2, 199, 5, rep).unwrap().p_value
        })
        .collect();
    p.sort_by(f64::total_cmp);
    let margin = 1.52 / (200f64).sqrt();
    for (i, &v) in p.iter().enumerate() {
        let ecdf = (i + 1) as f64 / 200.0;
        assert!(ecdf - v <= margin, "ECDF {ecdf} at p {v}");
    }
}

#[test]
fn shuffled_labels_yield_almost_no_discoveries() {
    let classes = vec!["a".to_string(), "b".to_string()];
    let mut discoveries = 0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<Vec<f64>> = (0..20).map(|_| white_noise(&mut rng, 40)).collect();
        let mut labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
        labels.shuffle(&mut rng);
        let r = rank_features(&matrix_from_columns(&cols), &labels, &classes, 200, seed, 0.05).unwrap();
        discoveries += r.n_significant;
    }
    // 400 null tests in all: expected false discoveries are far below one per run
    assert!(discoveries <= 2, "{discoveries}");
}

#[test]
fn independent_columns_are_weakly_correlated() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cols: Vec<Vec<f64>> = (0..5).map(|_| uniform_vec(&mut rng, 1000)).collect();
    for i in 0..5 {
        for j in i + 1..5 {
            assert!(spearman(&cols[i], &cols[j]).abs() < 0.15);
        }
    }
}

#[test]
fn random_predictions_score_chance() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in [2usize, 5] {
        let actual: Vec<usize> = (0..100_000).map(|_| rng.random_range(0..m)).collect();
        let predicted: Vec<usize> = (0..100_000).map(|_| rng.random_range(0..m)).collect();
        let classes: Vec<usize> = (0..m).collect();
        let b = balanced_accuracy(&predicted, &actual, &classes).unwrap();
        assert!((b - 1.0 / m as f64).abs() <= 0.02, "m {m}: {b}");
    }
}

#[test]
fn cross_validation_under_shuffled_labels_is_near_chance() {
    let classes = vec!["a".to_string(), "b".to_string()];
    let accuracies: Vec<f64> = (0..10)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<f64>> = (0..200).map(|_| uniform_vec(&mut rng, 5)).collect();
            let mut labels: Vec<usize> = (0..200).map(|i| i % 2).collect();
            labels.shuffle(&mut rng);
            cross_validate(&rows, &labels, &classes, &CvConfig { seed, ..CvConfig::default() })
                .unwrap()
                .mean_balanced_accuracy
        })
        .collect();
    let mean = accuracies.iter().sum::<f64>() / 10.0;
    assert!((mean - 0.5).abs() <= 0.1, "{accuracies:?}");
}

#[test]
fn five_confusable_classes_sit_at_twenty_percent() {
    let classes: Vec<String> = (0..5).map(|c| format!("c{c}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let rows: Vec<Vec<f64>> = (0..500).map(|_| uniform_vec(&mut rng, 4)).collect();
    let labels: Vec<usize> = (0..500).map(|i| i % 5).collect();
    let report = cross_validate(&rows, &labels, &classes, &CvConfig::default()).unwrap();
    assert_eq!(report.chance_level, 0.2);
    assert!((report.mean_balanced_accuracy - 0.2).abs() < 0.05, "{}", report.mean_balanced_accuracy);
}

#[test]
fn extraction_is_identical_across_thread_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let series: Vec<TimeSeries> = (0..12)
        .map(|i| TimeSeries::new(format!("s{i:02}"), ar1(&mut rng, 0.5, 300 + 37 * i)))
        .collect();
    let dataset = Dataset::new(series);
    let catalog = default_catalog();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| extract_all(&dataset, &catalog))
    };
    let (a, b) = (run(1), run(4));
    for r in 0..a.n_rows() {
        assert_eq!(a.quality_row(r), b.quality_row(r));
        let bits = |row: &[f64]| row.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(a.row(r)), bits(b.row(r)));
    }
}
