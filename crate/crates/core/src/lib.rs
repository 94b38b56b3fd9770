//! Time-series phenotyping: extract a catalog of interpretable features from
//! labeled univariate series, filter and normalize them, find the features
//! that separate the labeled groups, and classify and project the dataset.

pub mod error;
pub mod features;
pub mod inference;
pub mod learn;
pub mod quality;
pub mod series;
pub mod stats;

pub use error::{Error, RejectReason, Result};
pub use features::{default_catalog, extract_all, FeatureCatalog, FeatureFamily, FeatureMatrix, FeatureSpec};
pub use series::{trim_missing, validate, zscore, Dataset, QualityCode, TimeSeries, ValidationReport};
