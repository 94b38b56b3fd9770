//! Sample entropy and its multiscale extension.
//!
//! SampEn(m, r) here is the pair-counting form: over the N − m templates
//! starting at 0..N−m, B counts unordered pairs whose length-m templates lie
//! within Chebyshev distance r, A counts pairs that also match on the next
//! point, and SampEn = −ln(A / B). Using N − m templates for both lengths
//! keeps A ≤ B.

use super::values::{require_finite, require_len, require_varying, NamedValues};
use crate::error::{Error, Result};
use crate::stats;

pub const DEFAULT_M: usize = 2;
pub const DEFAULT_R_FRAC: f64 = 0.15;
pub const DEFAULT_MAX_SCALE: usize = 5;

/// Means of consecutive non-overlapping blocks of `scale` points; a trailing
/// partial block is dropped.
pub fn coarse_grain(x: &[f64], scale: usize) -> Result<Vec<f64>> {
    if scale == 0 {
        return Err(Error::InvalidArgument("scale must be at least 1".into()));
    }
    require_len(x, scale)?;
    if scale == 1 {
        return Ok(x.to_vec());
    }
    Ok(x.chunks_exact(scale)
        .map(|c| c.iter().sum::<f64>() / scale as f64)
        .collect())
}

/// Template match counts `(B, A)` for length-m and length-(m+1) templates
/// at absolute tolerance `r`.
pub fn match_counts(x: &[f64], m: usize, r: f64) -> (u64, u64) {
    if x.len() <= m {
        return (0, 0);
    }
    let templates = x.len() - m;
    let mut order: Vec<usize> = (0..templates).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));

    let (mut b, mut a) = (0u64, 0u64);
    for (p, &i) in order.iter().enumerate() {
        for &j in &order[p + 1..] {
            // sorted on the first template point, so the scan can stop as
            // soon as that coordinate alone is out of tolerance
            if (x[j] - x[i]).abs() > r {
                break;
            }
            if (1..m).all(|k| (x[i + k] - x[j + k]).abs() <= r) {
                b += 1;
                if (x[i + m] - x[j + m]).abs() <= r {
                    a += 1;
                }
            }
        }
    }
    (b, a)
}

/// SampEn at an absolute tolerance. A or B of zero yields `NoConvergence`.
pub fn sample_entropy_with_tolerance(x: &[f64], m: usize, r: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("embedding dimension must be at least 1".into()));
    }
    require_len(x, m + 2)?;
    require_finite(x)?;
    let (b, a) = match_counts(x, m, r);
    if a == 0 || b == 0 {
        return Err(Error::NoConvergence("no template matches"));
    }
    Ok(-(a as f64 / b as f64).ln())
}

/// SampEn with tolerance `r_frac` times the sample standard deviation of `x`.
pub fn sample_entropy(x: &[f64], m: usize, r_frac: f64) -> Result<f64> {
    require_len(x, m + 2)?;
    require_finite(x)?;
    require_varying(x)?;
    sample_entropy_with_tolerance(x, m, r_frac * stats::sample_std(x))
}

/// SampEn of the coarse-grained series at scales 1..=max_scale. The
/// tolerance is fixed once from the standard deviation of the original
/// series, and each scale succeeds or fails on its own.
pub fn multiscale_entropy(
    x: &[f64],
    m: usize,
    r_frac: f64,
    max_scale: usize,
) -> Result<NamedValues> {
    require_len(x, m + 2)?;
    require_finite(x)?;
    require_varying(x)?;
    let r = r_frac * stats::sample_std(x);
    let mut out = NamedValues::new();
    for scale in 1..=max_scale {
        let value = if x.len() < scale * (m + 2) {
            Err(Error::TooShort {
                needed: scale * (m + 2),
                got: x.len(),
            })
        } else {
            coarse_grain(x, scale).and_then(|c| sample_entropy_with_tolerance(&c, m, r))
        };
        out.push(format!("sampen_scale{scale}"), value);
    }
    Ok(out)
}
