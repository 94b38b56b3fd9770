use super::values::{require_usable, NamedValues};
use crate::error::Result;
use crate::stats;

/// Sample std of the means of `segments` equal non-overlapping segments,
/// relative to the std of the whole series.
pub fn stat_av(x: &[f64], segments: usize) -> f64 {
    let len = x.len() / segments;
    let means: Vec<f64> = x.chunks_exact(len).take(segments).map(stats::mean).collect();
    stats::sample_std(&means) / stats::sample_std(x)
}

pub fn stationarity_features(x: &[f64]) -> Result<NamedValues> {
    require_usable(x, 25)?;
    let global = stats::sample_std(x);
    let window = x.len() / 10;
    let (means, stds): (Vec<f64>, Vec<f64>) = x
        .chunks_exact(window)
        .map(|w| (stats::mean(w), stats::sample_std(w)))
        .unzip();

    let mut out = NamedValues::new();
    out.push("statav5", Ok(stat_av(x, 5)));
    out.push("sliding_mean_std_ratio", Ok(stats::sample_std(&means) / global));
    out.push("sliding_std_std_ratio", Ok(stats::sample_std(&stds) / global));
    Ok(out)
}
