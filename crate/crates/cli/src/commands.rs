//! The four pipeline steps behind the subcommands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsphen_core::inference::{correlation_cluster, rank_features, RankingResult, DEFAULT_Q_LEVEL};
use tsphen_core::learn::{cross_validate, pca, ClassifierReport, CvConfig, LinearConfig};
use tsphen_core::quality::{apply_filter, filter_features, normalize_sigmoid, RemovalReason};
use tsphen_core::{default_catalog, extract_all, FeatureCatalog};

use crate::config::ProjectConfig;
use crate::error::{CliError, Result};
use crate::ingest::{ingest, Ingested};
use crate::io::{
    feature_matrix_csv, fmt_f64, labels_csv, parse_labels, read_feature_matrix, read_json, read_text, table_csv,
    write_atomic,
};
use crate::manifest::{now, AnalyzeRecord, ComputeRecord, FileDigest, RunManifest};

pub const FEATURES_FILE: &str = "features.csv";
pub const QUALITY_FILE: &str = "quality.csv";
pub const CATALOG_FILE: &str = "catalog.json";
pub const LABELS_FILE: &str = "labels.csv";
pub const FILTER_FILE: &str = "filter_report.json";
pub const RANKING_FILE: &str = "ranking.json";
pub const TOP_FEATURES_FILE: &str = "top_features.csv";
pub const CORRELATION_FILE: &str = "correlation_matrix.csv";
pub const CLUSTER_FILE: &str = "correlation_cluster.json";
pub const CLASSIFICATION_FILE: &str = "classification.json";
pub const PCA_SCORES_FILE: &str = "pca_scores.csv";
pub const PCA_FILE: &str = "pca.json";
pub const REPORT_FILE: &str = "report.txt";

const PCA_COMPONENTS: usize = 2;
const REPORT_TOP: usize = 10;

fn load_catalog(cfg: &ProjectConfig) -> Result<(FeatureCatalog, String)> {
    let catalog = match &cfg.catalog {
        Some(p) => FeatureCatalog::from_json(&read_text(p)?)
            .map_err(|e| CliError::Config(format!("catalog {}: {e}", p.display())))?,
        None => default_catalog(),
    };
    let text = catalog.to_json();
    Ok((catalog, text))
}

fn describe_ingest(ing: &Ingested) -> String {
    let mut out = String::new();
    let ds = &ing.dataset;
    let _ = writeln!(out, "accepted series: {}", ds.series().len());
    for (class, n) in ds.classes().iter().zip(ds.class_counts()) {
        let _ = writeln!(out, "  class {class}: {n}");
    }
    if !ing.unlabeled.is_empty() {
        let _ = writeln!(out, "  unlabeled: {}", ing.unlabeled.len());
    }
    let _ = writeln!(out, "rejected series: {}", ing.rejected.len());
    for r in &ing.rejected {
        match &r.detail {
            Some(d) => {
                let _ = writeln!(out, "  {} ({}: {d})", r.series_id, r.reason);
            }
            None => {
                let _ = writeln!(out, "  {} ({})", r.series_id, r.reason);
            }
        }
    }
    out
}

/// Reads and validates the inputs without writing anything.
pub fn ingest_check(cfg: &ProjectConfig) -> Result<String> {
    let ing = ingest(cfg.require_input()?, cfg.labels.as_deref())?;
    if cfg.catalog.is_some() {
        load_catalog(cfg)?;
    }
    Ok(describe_ingest(&ing))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Extracts the feature matrix and writes it with its quality codes,
/// catalog, accepted labels and manifest.
pub fn compute(cfg: &ProjectConfig) -> Result<String> {
    let started = now();
    let (catalog, catalog_text) = load_catalog(cfg)?;
    let ing = ingest(cfg.require_input()?, cfg.labels.as_deref())?;
    if ing.dataset.is_empty() {
        return Err(CliError::Input("no usable series after ingestion".into()));
    }
    let matrix = extract_all(&ing.dataset, &catalog);

    let dir = &cfg.output;
    create_dir(dir)?;
    let (features, quality) = feature_matrix_csv(&matrix);
    write_atomic(&dir.join(FEATURES_FILE), features.as_bytes())?;
    write_atomic(&dir.join(QUALITY_FILE), quality.as_bytes())?;
    write_atomic(&dir.join(CATALOG_FILE), format!("{catalog_text}\n").as_bytes())?;
    write_atomic(&dir.join(LABELS_FILE), labels_csv(&ing.labels()).as_bytes())?;

    let inputs = ing
        .files
        .iter()
        .map(|p| std::fs::read(p).map(|b| FileDigest::of(p, &b)).map_err(|e| CliError::io(p, e)))
        .collect::<Result<_>>()?;
    let mut manifest = RunManifest::load_or_default(dir)?;
    manifest.compute = Some(ComputeRecord {
        started,
        finished: now(),
        config: cfg.clone(),
        catalog_sha256: crate::io::sha256_hex(catalog_text.as_bytes()),
        inputs,
        n_series: matrix.n_rows(),
        n_features: matrix.n_cols(),
        rejected: ing.rejected.clone(),
        unlabeled: ing.unlabeled.clone(),
    });
    manifest.analyze = None;
    manifest.save(dir)?;

    let mut out = describe_ingest(&ing);
    let _ = writeln!(out, "computed {} features for {} series into {}", matrix.n_cols(), matrix.n_rows(), dir.display());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSummary {
    pub n_computed: usize,
    pub n_kept: usize,
    pub n_normalized: usize,
    pub kept_feature_ids: Vec<String>,
    pub normalized_feature_ids: Vec<String>,
    pub removed: BTreeMap<String, RemovalReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub n_features: usize,
    pub regularization: f64,
    pub fold_normalization: bool,
    pub report: ClassifierReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaSummary {
    pub feature_ids: Vec<String>,
    pub variance_explained: Vec<f64>,
    /// One vector per component, aligned with `feature_ids`.
    pub loadings: Vec<Vec<f64>>,
}

struct Outputs {
    dir: PathBuf,
    written: Vec<FileDigest>,
}

impl Outputs {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.written.push(FileDigest::of(Path::new(name), bytes));
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable report");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Removes output left over from an earlier run of a step that failed now.
    fn discard(&self, names: &[&str]) {
        for n in names {
            let _ = std::fs::remove_file(self.dir.join(n));
        }
    }
}

fn read_input(dir: &Path, name: &str, hint: &str) -> Result<(String, FileDigest)> {
    let path = dir.join(name);
    if !path.exists() {
        return Err(CliError::MissingOutput(format!("{} not found; {hint}", path.display())));
    }
    let text = read_text(&path)?;
    let digest = FileDigest::of(Path::new(name), text.as_bytes());
    Ok((text, digest))
}

fn descriptions(dir: &Path) -> BTreeMap<String, String> {
    read_text(&dir.join(CATALOG_FILE))
        .ok()
        .and_then(|t| FeatureCatalog::from_json(&t).ok())
        .map(|c| {
            c.specs()
                .iter()
                .map(|s| (s.feature_id.clone(), s.description.clone()))
                .collect()
        })
        .unwrap_or_default()
}

fn top_features_csv(ranking: &RankingResult, top_k: usize, desc: &BTreeMap<String, String>) -> String {
    let header = [
        "rank", "feature_id", "statistic", "p_value", "q_value", "class", "n", "min", "q1", "median", "q3", "max",
        "mean", "description",
    ];
    let rows = ranking.features.iter().take(top_k).enumerate().flat_map(|(i, f)| {
        f.class_summaries.iter().map(move |s| {
            vec![
                (i + 1).to_string(),
                f.feature_id.clone(),
                fmt_f64(f.observed_stat),
                fmt_f64(f.p_value),
                fmt_f64(f.q_value),
                s.class.clone(),
                s.n.to_string(),
                fmt_f64(s.min),
                fmt_f64(s.q1),
                fmt_f64(s.median),
                fmt_f64(s.q3),
                fmt_f64(s.max),
                fmt_f64(s.mean),
                desc.get(&f.feature_id).cloned().unwrap_or_default(),
            ]
        })
    });
    table_csv(&header, rows)
}

/// Runs filter → rank → normalize → cross-validate → PCA → correlation
/// clustering on a computed matrix. A failing step is recorded and the
/// independent steps still run; the first failure is returned at the end.
pub fn analyze(cfg: &ProjectConfig) -> Result<String> {
    let started = now();
    let dir = &cfg.output;
    let hint = "run `tsphen compute` first";
    let (features, d1) = read_input(dir, FEATURES_FILE, hint)?;
    let (quality, d2) = read_input(dir, QUALITY_FILE, hint)?;
    let (labels_text, d3) = read_input(dir, LABELS_FILE, hint)?;
    let full = read_feature_matrix(&features, &quality)?;
    let labels = parse_labels(&labels_text)?;
    let desc = descriptions(dir);

    let mut warnings = Vec::new();
    let mut failures: Vec<CliError> = Vec::new();
    let mut out = Outputs {
        dir: dir.clone(),
        written: Vec::new(),
    };
    let mut summary = String::new();

    let labeled: Vec<usize> = (0..full.n_rows())
        .filter(|&r| labels.contains_key(&full.series_ids[r]))
        .collect();
    if labeled.len() < full.n_rows() {
        warnings.push(format!("{} unlabeled series left out of the analysis", full.n_rows() - labeled.len()));
    }
    let matrix = if labeled.is_empty() { full.clone() } else { full.select_rows(&labeled) };
    let row_labels: Vec<String> = matrix
        .series_ids
        .iter()
        .map(|id| labels.get(id).cloned().unwrap_or_default())
        .collect();
    let classes: Vec<String> = {
        let mut c: Vec<String> = row_labels.iter().filter(|l| !l.is_empty()).cloned().collect();
        c.sort();
        c.dedup();
        c
    };
    let label_idx: Vec<usize> = row_labels
        .iter()
        .map(|l| classes.iter().position(|c| c == l).unwrap_or(0))
        .collect();

    let report = filter_features(&matrix).map_err(CliError::analysis("filter"))?;
    let filtered = apply_filter(&matrix, &report);
    let normalized = normalize_sigmoid(&filtered).map_err(CliError::analysis("normalize"))?;
    let mut removed = report.removed.clone();
    for id in &normalized.zero_iqr {
        removed.insert(id.clone(), RemovalReason::ZeroIqr);
    }
    out.json(
        FILTER_FILE,
        &FilterSummary {
            n_computed: matrix.n_cols(),
            n_kept: filtered.n_cols(),
            n_normalized: normalized.feature_ids.len(),
            kept_feature_ids: report.kept_feature_ids.clone(),
            normalized_feature_ids: normalized.feature_ids.clone(),
            removed,
        },
    )?;
    let _ = writeln!(
        summary,
        "features: {} computed, {} kept after filtering, {} normalized",
        matrix.n_cols(),
        filtered.n_cols(),
        normalized.feature_ids.len()
    );

    match rank_features(&filtered, &label_idx, &classes, cfg.n_perm, cfg.seed, DEFAULT_Q_LEVEL) {
        Ok(ranking) => {
            out.json(RANKING_FILE, &ranking)?;
            let mut top_k = cfg.top_k;
            if top_k > ranking.features.len() {
                warnings.push(format!(
                    "top_k = {} exceeds the {} ranked features; clamped",
                    cfg.top_k,
                    ranking.features.len()
                ));
                top_k = ranking.features.len();
            }
            out.write(TOP_FEATURES_FILE, top_features_csv(&ranking, top_k, &desc).as_bytes())?;
            let _ = writeln!(summary, "significant at q < 0.05: {} of {}", ranking.n_significant, ranking.features.len());
            match correlation_cluster(&filtered, &ranking, top_k) {
                Ok(cluster) => {
                    let ids: Vec<&str> = cluster.ordered_ids();
                    let header: Vec<&str> = std::iter::once("feature_id").chain(ids.iter().copied()).collect();
                    let rows = cluster.leaf_order.iter().map(|&i| {
                        std::iter::once(cluster.feature_ids[i].clone())
                            .chain(cluster.leaf_order.iter().map(|&j| fmt_f64(cluster.abs_correlation[i][j])))
                            .collect()
                    });
                    out.write(CORRELATION_FILE, table_csv(&header, rows).as_bytes())?;
                    out.json(CLUSTER_FILE, &cluster)?;
                }
                Err(e) => {
                    out.discard(&[CORRELATION_FILE, CLUSTER_FILE]);
                    failures.push(CliError::analysis("correlation")(e));
                }
            }
        }
        Err(e) => {
            out.discard(&[RANKING_FILE, TOP_FEATURES_FILE, CORRELATION_FILE, CLUSTER_FILE]);
            failures.push(CliError::analysis("rank")(e));
        }
    }

    let cv_rows = if cfg.fold_normalization { filtered.rows() } else { normalized.rows.clone() };
    let cv = CvConfig {
        k: cfg.k_folds,
        seed: cfg.seed,
        linear: LinearConfig {
            regularization: cfg.regularization,
            ..LinearConfig::default()
        },
        fold_normalization: cfg.fold_normalization,
    };
    match cross_validate(&cv_rows, &label_idx, &classes, &cv) {
        Ok(report) => {
            if report.fold_converged.iter().any(|c| !c) {
                warnings.push("some folds hit the iteration budget before converging".into());
            }
            let _ = writeln!(
                summary,
                "cross-validated balanced accuracy: {:.4} (chance {:.4})",
                report.mean_balanced_accuracy, report.chance_level
            );
            out.json(
                CLASSIFICATION_FILE,
                &Classification {
                    n_features: cv_rows.first().map_or(0, Vec::len),
                    regularization: cfg.regularization,
                    fold_normalization: cfg.fold_normalization,
                    report,
                },
            )?;
        }
        Err(e) => {
            out.discard(&[CLASSIFICATION_FILE]);
            failures.push(CliError::analysis("classify")(e));
        }
    }

    match pca(&normalized.rows, PCA_COMPONENTS) {
        Ok(p) => {
            let header: Vec<String> = ["series_id".to_string(), "label".to_string()]
                .into_iter()
                .chain((1..=PCA_COMPONENTS).map(|c| format!("pc{c}")))
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = normalized.series_ids.iter().zip(&row_labels).zip(&p.scores).map(|((id, l), s)| {
                [id.clone(), l.clone()].into_iter().chain(s.iter().map(|v| fmt_f64(*v))).collect()
            });
            out.write(PCA_SCORES_FILE, table_csv(&header, rows).as_bytes())?;
            out.json(
                PCA_FILE,
                &PcaSummary {
                    feature_ids: normalized.feature_ids.clone(),
                    variance_explained: p.variance_explained,
                    loadings: p.loadings,
                },
            )?;
        }
        Err(e) => {
            out.discard(&[PCA_SCORES_FILE, PCA_FILE]);
            failures.push(CliError::analysis("pca")(e));
        }
    }

    let mut manifest = RunManifest::load_or_default(dir)?;
    manifest.analyze = Some(AnalyzeRecord {
        started,
        finished: now(),
        config: cfg.clone(),
        inputs: vec![d1, d2, d3],
        outputs: out.written.clone(),
        warnings: warnings.clone(),
        errors: failures.iter().map(|e| e.to_string()).collect(),
    });
    manifest.save(dir)?;

    for w in &warnings {
        let _ = writeln!(summary, "warning: {w}");
    }
    match failures.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Plain-text summary of the analysis outputs; also written to report.txt.
pub fn report(cfg: &ProjectConfig) -> Result<String> {
    let dir = &cfg.output;
    let hint = "run `tsphen analyze` first";
    for name in [RANKING_FILE, CLASSIFICATION_FILE, FILTER_FILE] {
        if !dir.join(name).exists() {
            return Err(CliError::MissingOutput(format!("{} not found; {hint}", dir.join(name).display())));
        }
    }
    let ranking: RankingResult = read_json(&dir.join(RANKING_FILE))?;
    let classification: Classification = read_json(&dir.join(CLASSIFICATION_FILE))?;
    let filter: FilterSummary = read_json(&dir.join(FILTER_FILE))?;
    let desc = descriptions(dir);

    let mut out = String::new();
    if let Some(first) = ranking.features.first() {
        let counts: Vec<String> = first.class_summaries.iter().map(|s| format!("{}: {}", s.class, s.n)).collect();
        let total: usize = first.class_summaries.iter().map(|s| s.n).sum();
        let _ = writeln!(out, "series: {total} ({})", counts.join(", "));
    }
    let _ = writeln!(
        out,
        "features: {} computed, filtered down to {} well-behaved features ({} after normalization)",
        filter.n_computed, filter.n_kept, filter.n_normalized
    );
    if ranking.n_significant == 0 {
        let _ = writeln!(out, "no features significant at q < 0.05");
    } else {
        let _ = writeln!(
            out,
            "{} of {} features significant at q < 0.05 ({} permutations)",
            ranking.n_significant,
            ranking.features.len(),
            ranking.n_perm
        );
    }
    let _ = writeln!(out, "top features:");
    for (i, f) in ranking.features.iter().take(REPORT_TOP).enumerate() {
        let d = desc.get(&f.feature_id).map(String::as_str).unwrap_or("");
        let _ = writeln!(
            out,
            "  {:>2}. {:<34} accuracy {:.3}  q = {:.3e}  {d}",
            i + 1,
            f.feature_id,
            f.observed_stat,
            f.q_value
        );
    }
    let r = &classification.report;
    let _ = writeln!(
        out,
        "cross-validated balanced accuracy: {:.4} ({}-fold, {} features)",
        r.mean_balanced_accuracy, r.k, classification.n_features
    );
    let _ = writeln!(out, "chance level: {} (1/{})", trim_number(r.chance_level), r.classes.len());
    write_atomic(&dir.join(REPORT_FILE), out.as_bytes())?;
    Ok(out)
}
