use super::values::{require_usable, NamedValues};
use crate::error::Result;
use crate::stats;

pub const WINDOWS: [usize; 3] = [1, 3, 5];

/// Normalized mean squared error of predicting each point by the mean of
/// the `window` points before it.
pub fn local_mean_nmse(x: &[f64], window: usize) -> f64 {
    let errors: Vec<f64> = (window..x.len())
        .map(|t| {
            let pred = x[t - window..t].iter().sum::<f64>() / window as f64;
            (x[t] - pred).powi(2)
        })
        .collect();
    stats::mean(&errors) / stats::sample_var(x)
}

pub fn local_forecast_features(x: &[f64]) -> Result<NamedValues> {
    require_usable(x, 20)?;
    let mut out = NamedValues::new();
    for w in WINDOWS {
        out.push(format!("localmean_nmse_l{w}"), Ok(local_mean_nmse(x, w)));
    }
    Ok(out)
}
