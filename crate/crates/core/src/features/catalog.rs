use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::values::NamedValues;
use super::{
    ar, autocorr, dfa, distribution, entropy, forecast, increments, outliers, spectral,
    stationarity, wavelet,
};
use crate::error::{Error, Result};

const INTEGER_PARAMS: [&str; 7] = ["max_lag", "m", "max_scale", "n_sizes", "min_size", "max_order", "levels"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FeatureFamily {
    Dist,
    Autocorr,
    Spectral,
    Entropy,
    Scaling,
    Model,
    Forecast,
    Stationarity,
    Increment,
    Outlier,
    Wavelet,
}

impl FeatureFamily {
    pub const ALL: [FeatureFamily; 11] = [
        FeatureFamily::Dist,
        FeatureFamily::Autocorr,
        FeatureFamily::Spectral,
        FeatureFamily::Entropy,
        FeatureFamily::Scaling,
        FeatureFamily::Model,
        FeatureFamily::Forecast,
        FeatureFamily::Stationarity,
        FeatureFamily::Increment,
        FeatureFamily::Outlier,
        FeatureFamily::Wavelet,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureFamily::Dist => "DIST",
            FeatureFamily::Autocorr => "AUTOCORR",
            FeatureFamily::Spectral => "SPECTRAL",
            FeatureFamily::Entropy => "ENTROPY",
            FeatureFamily::Scaling => "SCALING",
            FeatureFamily::Model => "MODEL",
            FeatureFamily::Forecast => "FORECAST",
            FeatureFamily::Stationarity => "STATIONARITY",
            FeatureFamily::Increment => "INCREMENT",
            FeatureFamily::Outlier => "OUTLIER",
            FeatureFamily::Wavelet => "WAVELET",
        }
    }

    /// Recognized parameters and their defaults.
    fn param_schema(self) -> &'static [(&'static str, f64)] {
        match self {
            FeatureFamily::Autocorr => &[("max_lag", autocorr::DEFAULT_MAX_LAG as f64)],
            FeatureFamily::Entropy => &[
                ("m", entropy::DEFAULT_M as f64),
                ("r_frac", entropy::DEFAULT_R_FRAC),
                ("max_scale", entropy::DEFAULT_MAX_SCALE as f64),
            ],
            FeatureFamily::Scaling => &[
                ("n_sizes", dfa::DEFAULT_N_SIZES as f64),
                ("min_size", dfa::DEFAULT_MIN_SIZE as f64),
            ],
            FeatureFamily::Model => &[("max_order", ar::DEFAULT_MAX_ORDER as f64)],
            FeatureFamily::Outlier => &[("threshold_z", outliers::DEFAULT_THRESHOLD_Z)],
            FeatureFamily::Wavelet => &[("levels", wavelet::DEFAULT_LEVELS as f64)],
            _ => &[],
        }
    }
}

impl fmt::Display for FeatureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fully resolved extractor parameters (defaults filled in).
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Params(BTreeMap<String, f64>);

impl Params {
    fn int(&self, key: &str) -> usize {
        self.0[key] as usize
    }

    fn real(&self, key: &str) -> f64 {
        self.0[key]
    }
}

/// One column of the feature matrix: which extractor family, which of its
/// named outputs, and with what parameters.
///
/// The output is named by the part of `feature_id` after the first `.`
/// (`entropy.sampen_scale3` selects `sampen_scale3`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub feature_id: String,
    pub family: FeatureFamily,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub min_length: usize,
    #[serde(default)]
    pub description: String,
}

impl FeatureSpec {
    pub fn output_name(&self) -> &str {
        self.feature_id
            .split_once('.')
            .map_or(self.feature_id.as_str(), |(_, rest)| rest)
    }

    pub(crate) fn resolved_params(&self) -> Result<Params> {
        let schema = self.family.param_schema();
        let mut params = BTreeMap::new();
        for key in self.params.keys() {
            if !schema.iter().any(|(k, _)| k == key) {
                return Err(Error::Catalog(format!(
                    "{}: unknown parameter `{key}` for family {}",
                    self.feature_id, self.family
                )));
            }
        }
        for &(key, default) in schema {
            let v = self.params.get(key).copied().unwrap_or(default);
            let integral = INTEGER_PARAMS.contains(&key);
            if !v.is_finite() || v <= 0.0 || (integral && v.fract() != 0.0) {
                return Err(Error::Catalog(format!(
                    "{}: parameter `{key}` must be a positive {}, got {v}",
                    self.feature_id,
                    if integral { "integer" } else { "number" }
                )));
            }
            params.insert(key.to_string(), v);
        }
        let params = Params(params);
        if self.family == FeatureFamily::Model && params.int("max_order") < 2 {
            return Err(Error::Catalog(format!("{}: max_order must be at least 2", self.feature_id)));
        }
        if self.family == FeatureFamily::Scaling && params.int("min_size") < 3 {
            return Err(Error::Catalog(format!("{}: min_size must be at least 3", self.feature_id)));
        }
        Ok(params)
    }
}

pub(crate) fn output_names(family: FeatureFamily, params: &Params) -> Vec<String> {
    let fixed = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match family {
        FeatureFamily::Dist => fixed(&distribution::OUTPUTS),
        FeatureFamily::Autocorr => {
            let mut names: Vec<String> =
                (1..=params.int("max_lag")).map(|k| format!("acf_{k}")).collect();
            names.extend(fixed(&["first_zero_lag", "first_1e_lag", "sum_sq_acf10"]));
            names
        }
        FeatureFamily::Spectral => fixed(&[
            "spectral_flatness",
            "spectral_centroid",
            "power_low_third",
            "power_mid_third",
            "power_high_third",
            "peak_freq_index_fraction",
        ]),
        FeatureFamily::Entropy => (1..=params.int("max_scale"))
            .map(|s| format!("sampen_scale{s}"))
            .collect(),
        FeatureFamily::Scaling => fixed(&["dfa_alpha", "dfa_fit_residual"]),
        FeatureFamily::Model => fixed(&[
            "ar2_coef1",
            "ar2_coef2",
            "ar2_resid_var_ratio",
            "ar_best_order_aic",
            "ar_best_resid_var_ratio",
        ]),
        FeatureFamily::Forecast => forecast::WINDOWS
            .iter()
            .map(|w| format!("localmean_nmse_l{w}"))
            .collect(),
        FeatureFamily::Stationarity => {
            fixed(&["statav5", "sliding_mean_std_ratio", "sliding_std_std_ratio"])
        }
        FeatureFamily::Increment => fixed(&["std_diff_z", "mean_abs_diff_z", "diff_var_ratio"]),
        FeatureFamily::Outlier => fixed(&["n_events_frac", "mean_interevent", "max_interevent"]),
        FeatureFamily::Wavelet => (1..=params.int("levels"))
            .map(|l| format!("haar_energy_frac_level{l}"))
            .collect(),
    }
}

pub(crate) fn run_extractor(family: FeatureFamily, params: &Params, x: &[f64]) -> Result<NamedValues> {
    match family {
        FeatureFamily::Dist => distribution::distribution_features(x),
        FeatureFamily::Autocorr => autocorr::autocorr_features(x, params.int("max_lag")),
        FeatureFamily::Spectral => spectral::spectral_features(x),
        FeatureFamily::Entropy => entropy::multiscale_entropy(
            x,
            params.int("m"),
            params.real("r_frac"),
            params.int("max_scale"),
        ),
        FeatureFamily::Scaling => {
            dfa::dfa_features(x, params.int("n_sizes"), params.int("min_size"))
        }
        FeatureFamily::Model => ar::ar_features(x, params.int("max_order")),
        FeatureFamily::Forecast => forecast::local_forecast_features(x),
        FeatureFamily::Stationarity => stationarity::stationarity_features(x),
        FeatureFamily::Increment => increments::increment_features(x),
        FeatureFamily::Outlier => outliers::outlier_timing_features(x, params.real("threshold_z")),
        FeatureFamily::Wavelet => wavelet::wavelet_features(x, params.int("levels")),
    }
}

/// Ordered, validated list of feature definitions. Its order fixes the
/// column order of every feature matrix computed from it.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureCatalog {
    specs: Vec<FeatureSpec>,
    resolved: Vec<Params>,
}

impl FeatureCatalog {
    pub fn new(specs: Vec<FeatureSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::Catalog("catalog is empty".into()));
        }
        let mut seen = HashSet::new();
        let mut resolved = Vec::with_capacity(specs.len());
        for spec in &specs {
            if !seen.insert(spec.feature_id.as_str()) {
                return Err(Error::Catalog(format!("duplicate feature id `{}`", spec.feature_id)));
            }
            if spec.min_length == 0 {
                return Err(Error::Catalog(format!("{}: min_length must be positive", spec.feature_id)));
            }
            let params = spec.resolved_params()?;
            let outputs = output_names(spec.family, &params);
            if !outputs.iter().any(|o| o == spec.output_name()) {
                return Err(Error::Catalog(format!(
                    "{}: family {} has no output `{}` (available: {})",
                    spec.feature_id,
                    spec.family,
                    spec.output_name(),
                    outputs.join(", ")
                )));
            }
            resolved.push(params);
        }
        Ok(FeatureCatalog { specs, resolved })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let specs: Vec<FeatureSpec> =
            serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        Self::new(specs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.specs).expect("catalog serializes")
    }

    pub fn specs(&self) -> &[FeatureSpec] {
        &self.specs
    }

    pub(crate) fn params(&self, i: usize) -> &Params {
        &self.resolved[i]
    }

    pub fn feature_ids(&self) -> Vec<String> {
        self.specs.iter().map(|s| s.feature_id.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn get(&self, feature_id: &str) -> Option<&FeatureSpec> {
        self.specs.iter().find(|s| s.feature_id == feature_id)
    }
}

fn describe(output: &str) -> String {
    let fixed = match output {
        "mean" => "arithmetic mean of the values",
        "std" => "sample standard deviation of the values",
        "skewness" => "skewness of the value distribution (third standardized moment)",
        "excess_kurtosis" => "excess kurtosis of the value distribution; heavy tails give positive values",
        "median" => "median value",
        "iqr" => "interquartile range of the values",
        "outlier_range_ratio" => "1st-99th percentile range relative to the interquartile range",
        "frac_abs_z_gt2" => "fraction of points more than 2 standard deviations from the mean",
        "first_zero_lag" => "first lag at which the autocorrelation becomes negative",
        "first_1e_lag" => "first lag at which the autocorrelation drops below 1/e",
        "sum_sq_acf10" => "sum of squared autocorrelations over lags 1-10",
        "spectral_flatness" => "geometric over arithmetic mean of the power spectrum; 1 = white, near 0 = tonal",
        "spectral_centroid" => "power-weighted mean frequency (cycles per sample)",
        "power_low_third" => "fraction of power in the lowest third of frequencies",
        "power_mid_third" => "fraction of power in the middle third of frequencies",
        "power_high_third" => "fraction of power in the highest third of frequencies",
        "peak_freq_index_fraction" => "position of the spectral peak as a fraction of the frequency range",
        "dfa_alpha" => "detrended fluctuation scaling exponent (0.5 uncorrelated, 1.5 random walk)",
        "dfa_fit_residual" => "RMS deviation of the fluctuation function from a power law",
        "ar2_coef1" => "first coefficient of a fitted AR(2) model",
        "ar2_coef2" => "second coefficient of a fitted AR(2) model",
        "ar2_resid_var_ratio" => "unexplained variance fraction of a fitted AR(2) model",
        "ar_best_order_aic" => "AR model order (1-8) preferred by AIC",
        "ar_best_resid_var_ratio" => "unexplained variance fraction of the AIC-preferred AR model",
        "statav5" => "spread of the means of 5 segments relative to overall spread (low = stationary)",
        "sliding_mean_std_ratio" => "spread of local means over 10 windows relative to overall spread",
        "sliding_std_std_ratio" => "spread of local standard deviations over 10 windows relative to overall spread",
        "std_diff_z" => "standard deviation of successive differences of the z-scored series",
        "mean_abs_diff_z" => "mean absolute successive difference of the z-scored series",
        "diff_var_ratio" => "variance of successive differences relative to the series variance",
        "n_events_frac" => "fraction of points beyond the outlier threshold",
        "mean_interevent" => "mean number of samples between consecutive outliers",
        "max_interevent" => "longest gap in samples between consecutive outliers",
        _ => "",
    };
    if !fixed.is_empty() {
        return fixed.to_string();
    }
    if let Some(k) = output.strip_prefix("acf_") {
        return format!("autocorrelation at lag {k}");
    }
    if let Some(s) = output.strip_prefix("sampen_scale") {
        return format!("sample entropy SampEn(2, 0.15) after coarse-graining by {s}");
    }
    if let Some(l) = output.strip_prefix("localmean_nmse_l") {
        return format!("normalized error forecasting each point by the mean of the previous {l}");
    }
    if let Some(l) = output.strip_prefix("haar_energy_frac_level") {
        return format!("fraction of energy in Haar wavelet detail level {l}");
    }
    String::new()
}

/// The built-in 55-feature catalog.
pub fn default_catalog() -> FeatureCatalog {
    let mut specs = Vec::new();
    for family in FeatureFamily::ALL {
        let params: BTreeMap<String, f64> = family
            .param_schema()
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect();
        let resolved = Params(params.clone());
        let prefix = family.as_str().to_lowercase();
        for output in output_names(family, &resolved) {
            let min_length = match family {
                FeatureFamily::Dist => 4,
                FeatureFamily::Autocorr => resolved.int("max_lag") + 2,
                FeatureFamily::Spectral => 16,
                FeatureFamily::Entropy => {
                    let scale: usize = output["sampen_scale".len()..].parse().unwrap();
                    scale * (resolved.int("m") + 2)
                }
                FeatureFamily::Scaling => 64,
                FeatureFamily::Model | FeatureFamily::Forecast => 20,
                FeatureFamily::Stationarity => 25,
                FeatureFamily::Increment => 3,
                FeatureFamily::Outlier => 10,
                FeatureFamily::Wavelet => 32,
            };
            specs.push(FeatureSpec {
                feature_id: format!("{prefix}.{output}"),
                family,
                params: params.clone(),
                min_length,
                description: describe(&output),
            });
        }
    }
    FeatureCatalog::new(specs).expect("built-in catalog is valid")
}
