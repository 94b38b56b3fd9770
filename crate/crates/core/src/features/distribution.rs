use super::values::{require_finite, require_len, NamedValues};
use crate::error::{Error, Result};
use crate::series::zscore;
use crate::stats;

pub const OUTPUTS: [&str; 8] = [
    "mean",
    "std",
    "skewness",
    "excess_kurtosis",
    "median",
    "iqr",
    "outlier_range_ratio",
    "frac_abs_z_gt2",
];

/// Location, spread, shape and tail summaries of the value distribution.
///
/// `mean`, `std` and `median` are defined for constant input; every other
/// output reports a degenerate input in that case.
pub fn distribution_features(x: &[f64]) -> Result<NamedValues> {
    require_len(x, 4)?;
    require_finite(x)?;

    let sorted = stats::sorted(x);
    let q = |p| stats::quantile_sorted(&sorted, p);
    let m2 = stats::central_moment(x, 2);

    let mut out = NamedValues::new();
    out.push("mean", Ok(stats::mean(x)));
    out.push("std", Ok(stats::sample_std(x)));

    let degenerate = m2 == 0.0;
    let shaped = |f: &dyn Fn() -> Result<f64>| {
        if degenerate {
            Err(Error::DegenerateInput("zero variance"))
        } else {
            f()
        }
    };
    out.push(
        "skewness",
        shaped(&|| Ok(stats::central_moment(x, 3) / m2.powf(1.5))),
    );
    out.push(
        "excess_kurtosis",
        shaped(&|| Ok(stats::central_moment(x, 4) / (m2 * m2) - 3.0)),
    );
    out.push("median", Ok(q(0.5)));
    let iqr = q(0.75) - q(0.25);
    out.push("iqr", shaped(&|| Ok(iqr)));
    out.push(
        "outlier_range_ratio",
        shaped(&|| {
            if iqr > 0.0 {
                Ok((q(0.99) - q(0.01)) / iqr)
            } else {
                Err(Error::DegenerateInput("zero interquartile range"))
            }
        }),
    );
    out.push(
        "frac_abs_z_gt2",
        shaped(&|| {
            let z = zscore(x)?;
            Ok(z.iter().filter(|v| v.abs() > 2.0).count() as f64 / x.len() as f64)
        }),
    );
    Ok(out)
}
