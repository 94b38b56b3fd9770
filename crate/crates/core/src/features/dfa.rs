use super::values::{require_len, require_usable, NamedValues};
use crate::error::{Error, Result};
use crate::stats;

pub const DEFAULT_N_SIZES: usize = 10;
pub const DEFAULT_MIN_SIZE: usize = 4;

/// `n_sizes` geometrically spaced integer window sizes from `min_size` to
/// ⌊N/4⌋, rounded, with duplicates removed.
pub fn window_grid(n: usize, n_sizes: usize, min_size: usize) -> Vec<usize> {
    let max_size = n / 4;
    if max_size < min_size || n_sizes == 0 {
        return Vec::new();
    }
    if n_sizes == 1 {
        return vec![min_size];
    }
    let (lo, hi) = ((min_size as f64).ln(), (max_size as f64).ln());
    let mut sizes: Vec<usize> = (0..n_sizes)
        .map(|i| (lo + (hi - lo) * i as f64 / (n_sizes - 1) as f64).exp().round() as usize)
        .collect();
    sizes.dedup();
    sizes
}

/// RMS residual of order-1 detrending of `profile` over non-overlapping
/// windows of `size` points (trailing remainder ignored).
pub fn fluctuation(profile: &[f64], size: usize) -> f64 {
    let t_mean = (size - 1) as f64 / 2.0;
    let t_ss: f64 = (0..size).map(|t| (t as f64 - t_mean).powi(2)).sum();
    let mut rss = 0.0;
    let mut covered = 0usize;
    for w in profile.chunks_exact(size) {
        let y_mean = stats::mean(w);
        let slope = w
            .iter()
            .enumerate()
            .map(|(t, y)| (t as f64 - t_mean) * (y - y_mean))
            .sum::<f64>()
            / t_ss;
        rss += w
            .iter()
            .enumerate()
            .map(|(t, y)| {
                let resid = y - y_mean - slope * (t as f64 - t_mean);
                resid * resid
            })
            .sum::<f64>();
        covered += size;
    }
    (rss / covered as f64).sqrt()
}

/// Detrended fluctuation analysis: `dfa_alpha` is the log-log slope of
/// fluctuation against window size, `dfa_fit_residual` the RMS residual of
/// that straight-line fit.
pub fn dfa_features(x: &[f64], n_sizes: usize, min_size: usize) -> Result<NamedValues> {
    require_len(x, 64)?;
    require_usable(x, 64)?;
    if min_size < 3 {
        return Err(Error::InvalidArgument("DFA windows need at least 3 points".into()));
    }
    let mu = stats::mean(x);
    let profile: Vec<f64> = x
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v - mu;
            Some(*acc)
        })
        .collect();

    let sizes = window_grid(x.len(), n_sizes, min_size);
    if sizes.len() < 2 {
        return Err(Error::TooShort {
            needed: 4 * (min_size + 1),
            got: x.len(),
        });
    }
    let log_s: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let log_f: Vec<f64> = sizes
        .iter()
        .map(|&s| fluctuation(&profile, s).ln())
        .collect();
    if log_f.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("zero fluctuation"));
    }
    let (slope, intercept) = stats::linear_fit(&log_s, &log_f);
    let resid = (log_s
        .iter()
        .zip(&log_f)
        .map(|(s, f)| (f - slope * s - intercept).powi(2))
        .sum::<f64>()
        / sizes.len() as f64)
        .sqrt();

    let mut out = NamedValues::new();
    out.push("dfa_alpha", Ok(slope));
    out.push("dfa_fit_residual", Ok(resid));
    Ok(out)
}
