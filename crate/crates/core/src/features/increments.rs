use super::values::{require_usable, NamedValues};
use crate::error::Result;
use crate::series::zscore;
use crate::stats;

/// Spread of successive differences of the z-scored series.
pub fn increment_features(x: &[f64]) -> Result<NamedValues> {
    require_usable(x, 3)?;
    let z = zscore(x)?;
    let d: Vec<f64> = z.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = NamedValues::new();
    out.push("std_diff_z", Ok(stats::sample_std(&d)));
    out.push(
        "mean_abs_diff_z",
        Ok(d.iter().map(|v| v.abs()).sum::<f64>() / d.len() as f64),
    );
    out.push("diff_var_ratio", Ok(stats::sample_var(&d) / stats::sample_var(&z)));
    Ok(out)
}
