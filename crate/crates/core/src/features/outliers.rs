use super::values::{require_usable, NamedValues};
use crate::error::Result;
use crate::series::zscore;

pub const DEFAULT_THRESHOLD_Z: f64 = 2.0;

/// Timing of extreme points: the fraction of samples beyond `threshold_z`
/// standard deviations, and the mean and max gap between consecutive such
/// events. With fewer than two events both gaps are N.
pub fn outlier_timing_features(x: &[f64], threshold_z: f64) -> Result<NamedValues> {
    require_usable(x, 10)?;
    let z = zscore(x)?;
    let n = x.len();
    let events: Vec<usize> = (0..n).filter(|&i| z[i].abs() > threshold_z).collect();
    let gaps: Vec<usize> = events.windows(2).map(|w| w[1] - w[0]).collect();
    let (mean_gap, max_gap) = if gaps.is_empty() {
        (n as f64, n as f64)
    } else {
        (
            gaps.iter().sum::<usize>() as f64 / gaps.len() as f64,
            *gaps.iter().max().unwrap() as f64,
        )
    };
    let mut out = NamedValues::new();
    out.push("n_events_frac", Ok(events.len() as f64 / n as f64));
    out.push("mean_interevent", Ok(mean_gap));
    out.push("max_interevent", Ok(max_gap));
    Ok(out)
}
