use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::values::{require_usable, NamedValues};
use crate::error::Result;
use crate::series::zscore;

/// One-sided periodogram |X_k|²/N for k = 1..=N/2 (DC excluded, rectangular
/// window). Index 0 of the result is frequency bin 1.
pub fn periodogram(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[1..=n / 2]
        .iter()
        .map(|c| c.norm_sqr() / n as f64)
        .collect()
}

/// Periodogram shape summaries of the z-scored series.
pub fn spectral_features(x: &[f64]) -> Result<NamedValues> {
    require_usable(x, 16)?;
    let z = zscore(x)?;
    let n = z.len();
    let power = periodogram(&z);
    let bins = power.len();

    let total: f64 = power.iter().sum();
    let mean_log = power.iter().map(|p| p.ln()).sum::<f64>() / bins as f64;
    let flatness = mean_log.exp() / (total / bins as f64);

    let centroid = power
        .iter()
        .enumerate()
        .map(|(i, p)| (i + 1) as f64 / n as f64 * p)
        .sum::<f64>()
        / total;

    let mut bands = [0.0; 3];
    for (i, p) in power.iter().enumerate() {
        bands[(3 * i / bins).min(2)] += p;
    }

    let peak = power
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best })
        .0;

    let mut out = NamedValues::new();
    out.push("spectral_flatness", Ok(flatness));
    out.push("spectral_centroid", Ok(centroid));
    out.push("power_low_third", Ok(bands[0] / total));
    out.push("power_mid_third", Ok(bands[1] / total));
    out.push("power_high_third", Ok(bands[2] / total));
    out.push("peak_freq_index_fraction", Ok((peak + 1) as f64 / bins as f64));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};
    use std::f64::consts::PI;

    fn direct_dft_power(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (1..=n / 2)
            .map(|k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (t, v) in x.iter().enumerate() {
                    let ang = -2.0 * PI * (k * t) as f64 / n as f64;
                    re += v * ang.cos();
                    im += v * ang.sin();
                }
                (re * re + im * im) / n as f64
            })
            .collect()
    }

    #[test]
    fn fft_periodogram_matches_direct_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..97).map(|_| StandardNormal.sample(&mut rng)).collect();
        for (a, b) in periodogram(&x).iter().zip(direct_dft_power(&x)) {
            assert!((a - b).abs() < 1e-9 * (1.0 + b));
        }
    }

    #[test]
    fn pure_tone_is_not_flat() {
        let x: Vec<f64> = (0..256)
            .map(|t| (2.0 * PI * 8.0 * t as f64 / 256.0).sin())
            .collect();
        let f = spectral_features(&x).unwrap();
        assert!(f.value("spectral_flatness").unwrap() < 0.01);
        let bins = 128.0;
        assert_eq!(f.value("peak_freq_index_fraction").unwrap() * bins, 8.0);

        let oracle = direct_dft_power(&zscore(&x).unwrap());
        let argmax = oracle
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(argmax + 1, 8);
    }

    #[test]
    fn white_noise_flatness_near_exp_minus_gamma() {
        let target = (-0.577_215_664_901_532_9f64).exp();
        let mut mean = 0.0;
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..1 << 14).map(|_| StandardNormal.sample(&mut rng)).collect();
            let flat = spectral_features(&x).unwrap().value("spectral_flatness").unwrap();
            assert!((flat - target).abs() < 0.1, "seed {seed}: {flat}");
            mean += flat / 20.0;
        }
        assert!((mean - target).abs() < 0.02);
    }

    #[test]
    fn low_band_signal() {
        let x: Vec<f64> = (0..512)
            .map(|t| {
                let t = t as f64;
                (2.0 * PI * 3.0 * t / 512.0).sin() + 0.5 * (2.0 * PI * 40.0 * t / 512.0).cos()
            })
            .collect();
        let f = spectral_features(&x).unwrap();
        assert!(f.value("power_low_third").unwrap() > 0.99);
        let sum: f64 = ["power_low_third", "power_mid_third", "power_high_third"]
            .iter()
            .map(|n| f.value(n).unwrap())
            .sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}
