mod support;

use std::path::Path;

use support::*;
use tsphen_cli::commands::{self, Classification};
use tsphen_cli::io::read_feature_matrix;
use tsphen_cli::manifest::RunManifest;
use tsphen_cli::{CliError, ProjectConfig};
use tsphen_core::inference::RankingResult;
use tsphen_core::{default_catalog, extract_all};

fn config(input: &Path, output: &Path) -> ProjectConfig {
    ProjectConfig {
        input: Some(input.to_path_buf()),
        output: output.to_path_buf(),
        n_perm: 100,
        k_folds: 5,
        ..ProjectConfig::default()
    }
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn compute_writes_the_matrix_and_is_repeatable() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    ar_dataset(&data, &[("a", 0.2), ("b", 0.8)], 5, 300, 1);
    let cfg = config(&data, &out);
    commands::compute(&cfg).unwrap();
    let features = read(&out.join("features.csv"));
    let lines: Vec<&str> = features.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0].split(',').count(), 56);
    for f in ["quality.csv", "catalog.json", "manifest.json", "labels.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    commands::compute(&cfg).unwrap();
    assert_eq!(read(&out.join("features.csv")), features);
}

#[test]
fn written_matrix_round_trips_exactly() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    ar_dataset(&data, &[("a", 0.5)], 6, 200, 2);
    commands::compute(&config(&data, &out)).unwrap();
    let back = read_feature_matrix(&read(&out.join("features.csv")), &read(&out.join("quality.csv"))).unwrap();

    let ing = tsphen_cli::ingest::ingest(&data, None).unwrap();
    let direct = extract_all(&ing.dataset, &default_catalog());
    assert_eq!(back.series_ids, direct.series_ids);
    assert_eq!(back.feature_ids, direct.feature_ids);
    for r in 0..direct.n_rows() {
        assert_eq!(back.quality_row(r), direct.quality_row(r));
        for c in 0..direct.n_cols() {
            assert_eq!(back.value(r, c).to_bits(), direct.value(r, c).to_bits());
        }
    }
}

#[test]
fn rejected_series_are_listed_and_do_not_disturb_others() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    ar_dataset(&data, &[("a", 0.3)], 4, 200, 3);
    commands::compute(&config(&data, &out)).unwrap();
    let clean = read(&out.join("features.csv"));

    let mut gappy: Vec<Option<f64>> = vec![None; 40];
    gappy.extend((0..160).map(|i| Some(i as f64)));
    write_series(&data, "gappy", &gappy);
    std::fs::write(data.join("broken.csv"), "1\n2\nnot-a-number\n").unwrap();
    commands::compute(&config(&data, &out)).unwrap();
    assert_eq!(read(&out.join("features.csv")), clean);

    let manifest: RunManifest = serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    let rejected = manifest.compute.unwrap().rejected;
    let reasons: Vec<(&str, &str)> = rejected.iter().map(|r| (r.series_id.as_str(), r.reason.as_str())).collect();
    assert_eq!(reasons, [("broken", "malformed"), ("gappy", "too_much_missing")]);
}

#[test]
fn long_format_input_matches_directory_input() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    ar_dataset(&data, &[("a", 0.3), ("b", 0.6)], 3, 150, 4);
    let mut long = String::from("series_id,t_index,value\n");
    for path in files_in(&data) {
        let id = path.file_stem().unwrap().to_str().unwrap().to_string();
        if id == "labels" {
            continue;
        }
        for (t, v) in read(&path).lines().skip(1).enumerate() {
            long.push_str(&format!("{id},{t},{v}\n"));
        }
    }
    let long_path = tmp.path().join("long.csv");
    std::fs::write(&long_path, long).unwrap();

    let (o1, o2) = (tmp.path().join("o1"), tmp.path().join("o2"));
    commands::compute(&config(&data, &o1)).unwrap();
    let mut cfg = config(&long_path, &o2);
    cfg.labels = Some(data.join("labels.csv"));
    commands::compute(&cfg).unwrap();
    assert_eq!(read(&o1.join("features.csv")), read(&o2.join("features.csv")));
    assert_eq!(read(&o1.join("labels.csv")), read(&o2.join("labels.csv")));
}

#[test]
fn analyze_and_report_on_two_classes() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    ar_dataset(&data, &[("a", 0.1), ("b", 0.9)], 10, 400, 5);
    let mut cfg = config(&data, &out);
    cfg.top_k = 500;
    commands::compute(&cfg).unwrap();
    commands::analyze(&cfg).unwrap();
    for f in [
        "ranking.json",
        "top_features.csv",
        "classification.json",
        "pca_scores.csv",
        "pca.json",
        "correlation_matrix.csv",
        "correlation_cluster.json",
        "filter_report.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let ranking: RankingResult = serde_json::from_str(&read(&out.join("ranking.json"))).unwrap();
    assert!(ranking.features.iter().all(|f| f.p_value > 0.0 && f.q_value >= f.p_value));
    let class: Classification = serde_json::from_str(&read(&out.join("classification.json"))).unwrap();
    assert_eq!(class.report.fold_balanced_accuracy.len(), 5);

    let manifest: RunManifest = serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    let warnings = manifest.analyze.unwrap().warnings;
    assert!(warnings.iter().any(|w| w.contains("top_k = 500")), "{warnings:?}");

    let corr = read(&out.join("correlation_matrix.csv"));
    assert_eq!(corr.lines().count(), ranking.features.len() + 1);

    let pca = read(&out.join("pca_scores.csv"));
    assert!(pca.starts_with("series_id,label,pc1,pc2\n"));
    assert_eq!(pca.lines().count(), 21);

    let text = commands::report(&cfg).unwrap();
    assert!(text.contains("chance level: 0.5"), "{text}");
    assert!(text.contains("series: 20 (a: 10, b: 10)"), "{text}");
    assert!(out.join("report.txt").exists());
}

#[test]
fn one_class_still_gets_a_projection() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    ar_dataset(&data, &[("only", 0.5)], 8, 200, 6);
    let cfg = config(&data, &out);
    commands::compute(&cfg).unwrap();
    let err = commands::analyze(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("MISSING_CLASS"), "{err}");
    assert!(out.join("pca_scores.csv").exists());
    assert!(!out.join("ranking.json").exists());
    assert!(!out.join("classification.json").exists());
}

#[test]
fn report_without_analysis_names_the_remedy() {
    let tmp = tempfile::tempdir().unwrap();
    let err = commands::report(&config(tmp.path(), tmp.path())).unwrap_err();
    assert!(matches!(err, CliError::MissingOutput(_)));
    assert!(err.to_string().contains("ranking.json") && err.to_string().contains("tsphen analyze"));
}

#[test]
fn report_states_an_empty_significant_set() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    // two classes from the same process: nothing should separate them
    ar_dataset(&data, &[("a", 0.5), ("b", 0.5)], 10, 200, 7);
    let mut cfg = config(&data, &out);
    cfg.n_perm = 20;
    commands::compute(&cfg).unwrap();
    commands::analyze(&cfg).unwrap();
    let text = commands::report(&cfg).unwrap();
    assert!(text.contains("no features significant at q < 0.05"), "{text}");
}

#[test]
fn accepted_labels_are_written_in_id_order() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    ar_dataset(&data, &[("x", 0.2), ("y", 0.4)], 3, 100, 8);
    commands::compute(&config(&data, &out)).unwrap();
    assert!(read(&out.join("labels.csv")).starts_with("series_id,label\nx_000,x\n"));
}

#[test]
fn binary_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let (data, out) = (tmp.path().join("data"), tmp.path().join("out"));
    ar_dataset(&data, &[("a", 0.2), ("b", 0.7)], 6, 120, 9);
    let (d, o) = (path_str(&data), path_str(&out));

    let ok = tsphen(&["ingest-check", "--input", d]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("accepted series: 12"));

    let empty_catalog = tmp.path().join("empty.json");
    std::fs::write(&empty_catalog, "[]").unwrap();
    let r = tsphen(&["compute", "--input", d, "--output", o, "--catalog", path_str(&empty_catalog)]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("config"));

    let conf = tmp.path().join("project.conf");
    std::fs::write(&conf, format!("# test project\ninput = {d}\noutput = {o}\nn_perm = 50\n")).unwrap();
    let c = path_str(&conf);
    assert_eq!(tsphen(&["compute", "--config", c, "--threads", "2"]).status.code(), Some(0));
    // six members per class cannot fill ten folds
    let r = tsphen(&["analyze", "--config", c]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("CLASS_TOO_SMALL"));
    assert_eq!(tsphen(&["analyze", "--config", c, "--k-folds", "3"]).status.code(), Some(0));
    let r = tsphen(&["report", "--config", c]);
    assert_eq!(r.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&r.stdout).contains("chance level: 0.5"));

    std::fs::write(data.join("labels.csv"), "series_id,label\nghost,a\n").unwrap();
    let r = tsphen(&["compute", "--config", c]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("ghost"));

    std::fs::write(&conf, "input = x\nbogus = 1\n").unwrap();
    assert_eq!(tsphen(&["compute", "--config", c]).status.code(), Some(1));
}
