//! Project configuration: a flat `key = value` file with `#` comments,
//! overridable from the command line.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsphen_core::inference::{DEFAULT_N_PERM, DEFAULT_TOP_K};
use tsphen_core::learn::LinearConfig;

use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_K_FOLDS: usize = 10;
pub const DEFAULT_OUTPUT: &str = "tsphen-out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectConfig {
    /// A directory of one-column series files or a long-format CSV.
    pub input: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub n_perm: usize,
    pub k_folds: usize,
    pub seed: u64,
    pub regularization: f64,
    pub top_k: usize,
    pub output: PathBuf,
    /// Fit the normalization on training folds only during cross-validation.
    pub fold_normalization: bool,
}

impl Default for ProjectConfig {
    fn default() -> Self {
        ProjectConfig {
            input: None,
            labels: None,
            catalog: None,
            n_perm: DEFAULT_N_PERM,
            k_folds: DEFAULT_K_FOLDS,
            seed: DEFAULT_SEED,
            regularization: LinearConfig::default().regularization,
            top_k: DEFAULT_TOP_K,
            output: PathBuf::from(DEFAULT_OUTPUT),
            fold_normalization: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("line {line}: `{key}` expects a number, got `{value}`")))
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("line {line}: `{key}` expects true or false, got `{value}`"))),
    }
}

impl ProjectConfig {
    /// Parses config text. Paths are kept as written.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ProjectConfig::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line_no}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(CliError::Config(format!("line {line_no}: `{key}` has no value")));
            }
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!("line {line_no}: `{key}` given twice")));
            }
            match key {
                "input" => cfg.input = Some(PathBuf::from(value)),
                "labels" => cfg.labels = Some(PathBuf::from(value)),
                "catalog" => cfg.catalog = Some(PathBuf::from(value)),
                "output" => cfg.output = PathBuf::from(value),
                "n_perm" => cfg.n_perm = parse_num(key, value, line_no)?,
                "k_folds" => cfg.k_folds = parse_num(key, value, line_no)?,
                "seed" => cfg.seed = parse_num(key, value, line_no)?,
                "regularization" => cfg.regularization = parse_num(key, value, line_no)?,
                "top_k" => cfg.top_k = parse_num(key, value, line_no)?,
                "fold_normalization" => cfg.fold_normalization = parse_bool(key, value, line_no)?,
                _ => return Err(CliError::Config(format!("line {line_no}: unknown key `{key}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths are taken from the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [cfg.input.as_mut(), cfg.labels.as_mut(), cfg.catalog.as_mut()]
            .into_iter()
            .flatten()
        {
            rebase(p);
        }
        rebase(&mut cfg.output);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_perm == 0 {
            return Err(CliError::Config("n_perm must be positive".into()));
        }
        if self.k_folds < 2 {
            return Err(CliError::Config("k_folds must be at least 2".into()));
        }
        if !(self.regularization > 0.0 && self.regularization.is_finite()) {
            return Err(CliError::Config("regularization must be a positive number".into()));
        }
        if self.top_k == 0 {
            return Err(CliError::Config("top_k must be positive".into()));
        }
        if self.output.as_os_str().is_empty() {
            return Err(CliError::Config("output must name a directory".into()));
        }
        Ok(())
    }

    pub fn require_input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Config("no input given (set `input` or pass --input)".into()))
    }
}
