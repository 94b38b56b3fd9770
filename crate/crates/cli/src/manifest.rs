//! Run manifest: what was computed from what, and when. Timestamps live
//! only here, so every other output file is reproducible byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ProjectConfig;
use crate::error::Result;
use crate::ingest::Rejection;
use crate::io::{read_json, sha256_hex, write_json};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputeRecord {
    pub started: String,
    pub finished: String,
    pub config: ProjectConfig,
    pub catalog_sha256: String,
    pub inputs: Vec<FileDigest>,
    pub n_series: usize,
    pub n_features: usize,
    pub rejected: Vec<Rejection>,
    pub unlabeled: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeRecord {
    pub started: String,
    pub finished: String,
    pub config: ProjectConfig,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    #[serde(default)]
    pub compute: Option<ComputeRecord>,
    #[serde(default)]
    pub analyze: Option<AnalyzeRecord>,
}

impl Default for RunManifest {
    fn default() -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            compute: None,
            analyze: None,
        }
    }
}

impl RunManifest {
    /// The manifest in `dir`, or a fresh one if none exists yet.
    pub fn load_or_default(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        if path.exists() {
            let mut m: RunManifest = read_json(&path)?;
            m.tool_version = env!("CARGO_PKG_VERSION").to_string();
            Ok(m)
        } else {
            Ok(RunManifest::default())
        }
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join(MANIFEST_FILE), self)
    }
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}
