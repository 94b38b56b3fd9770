use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::values::{require_len, require_usable, NamedValues};
use crate::error::Result;
use crate::stats;

pub const DEFAULT_MAX_LAG: usize = 10;

/// Biased autocorrelation at lags 0..=max_lag: lag-k cross products over
/// N − k terms, all divided by the lag-0 sum of squares.
pub fn acf(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    require_usable(x, 2)?;
    let max_lag = max_lag.min(x.len() - 1);
    let mu = stats::mean(x);
    let dev: Vec<f64> = x.iter().map(|v| v - mu).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    Ok((0..=max_lag)
        .map(|k| {
            dev[..dev.len() - k]
                .iter()
                .zip(&dev[k..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / denom
        })
        .collect())
}

/// Same quantity as [`acf`] for every lag 0..N, via a zero-padded FFT.
pub(crate) fn acf_all_lags(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mu = stats::mean(x);
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .map(|v| Complex::new(v - mu, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let zero = buf[0].re;
    buf[..n].iter().map(|c| c.re / zero).collect()
}

/// Autocorrelation summaries: the first `max_lag` coefficients, the first
/// lags at which the ACF drops below 0 and below 1/e (N when it never does),
/// and the sum of squares of the first ten coefficients.
pub fn autocorr_features(x: &[f64], max_lag: usize) -> Result<NamedValues> {
    require_len(x, max_lag + 2)?;
    require_usable(x, 2)?;
    let n = x.len();
    let direct = acf(x, max_lag.max(10))?;
    let mut all: Option<Vec<f64>> = None;
    let mut at = |k: usize| -> f64 {
        if k < direct.len() {
            direct[k]
        } else {
            all.get_or_insert_with(|| acf_all_lags(x))[k]
        }
    };
    let mut first_below = |threshold: f64| {
        (1..n)
            .find(|&k| at(k) < threshold)
            .map_or(n as f64, |k| k as f64)
    };
    let first_zero = first_below(0.0);
    let first_1e = first_below(std::f64::consts::E.recip());

    let mut out = NamedValues::new();
    for k in 1..=max_lag {
        out.push(format!("acf_{k}"), Ok(direct[k]));
    }
    out.push("first_zero_lag", Ok(first_zero));
    out.push("first_1e_lag", Ok(first_1e));
    let sum_sq: f64 = direct[1..direct.len().min(11)].iter().map(|r| r * r).sum();
    out.push("sum_sq_acf10", Ok(sum_sq));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn alternating_sequence() {
        let r = acf(&[1.0, -1.0, 1.0, -1.0], 1).unwrap();
        assert!((r[1] + 0.75).abs() < 1e-15);
        assert_eq!(r[0], 1.0);
    }

    #[test]
    fn white_noise_lag_one_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>() - 0.5).collect();
        let f = autocorr_features(&x, 10).unwrap();
        assert!(f.value("acf_1").unwrap().abs() < 0.05);
        assert!(f.value("first_zero_lag").unwrap() < 20.0);
    }

    #[test]
    fn fft_route_matches_direct_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..300).map(|_| rng.random::<f64>()).collect();
        let direct = acf(&x, 299).unwrap();
        let fft = acf_all_lags(&x);
        for (a, b) in direct.iter().zip(&fft) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn slow_sinusoid_crossings() {
        // period 100: acf crosses zero near lag 25 and 1/e a little earlier
        let x: Vec<f64> = (0..2000)
            .map(|t| (2.0 * std::f64::consts::PI * t as f64 / 100.0).sin())
            .collect();
        let f = autocorr_features(&x, 10).unwrap();
        let zero = f.value("first_zero_lag").unwrap();
        let e = f.value("first_1e_lag").unwrap();
        assert!((zero - 26.0).abs() <= 1.0, "{zero}");
        assert!(e < zero && e > 15.0, "{e}");
    }

    #[test]
    fn alternating_crosses_at_lag_one() {
        let x: Vec<f64> = (0..40).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let f = autocorr_features(&x, 10).unwrap();
        assert_eq!(f.value("first_zero_lag").unwrap(), 1.0);
        assert_eq!(f.value("first_1e_lag").unwrap(), 1.0);
    }

    #[test]
    fn constant_is_degenerate() {
        assert!(matches!(
            autocorr_features(&[2.0; 50], 10),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            autocorr_features(&[1.0, 2.0, 3.0], 10),
            Err(Error::TooShort { needed: 12, .. })
        ));
    }
}
