//! The feature catalog and the extractors behind it.

pub mod ar;
pub mod autocorr;
mod catalog;
pub mod dfa;
pub mod distribution;
pub mod entropy;
mod extract;
pub mod forecast;
pub mod increments;
pub mod outliers;
pub mod spectral;
pub mod stationarity;
mod values;
pub mod wavelet;

pub use catalog::{default_catalog, FeatureCatalog, FeatureFamily, FeatureSpec};
pub use extract::{extract_all, extract_series, FeatureMatrix};
pub use values::NamedValues;
