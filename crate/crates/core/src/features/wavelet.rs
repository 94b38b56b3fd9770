use std::f64::consts::FRAC_1_SQRT_2;

use super::values::{require_len, require_usable, NamedValues};
use crate::error::{Error, Result};
use crate::stats;

pub const DEFAULT_LEVELS: usize = 4;

/// Full-depth orthonormal Haar decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarDecomposition {
    /// `details[0]` is the finest level.
    pub details: Vec<Vec<f64>>,
    pub approximation: f64,
}

impl HaarDecomposition {
    pub fn energy(&self) -> f64 {
        self.approximation * self.approximation
            + self
                .details
                .iter()
                .flatten()
                .map(|d| d * d)
                .sum::<f64>()
    }
}

/// Haar DWT of a signal whose length is a power of two.
pub fn haar_dwt(x: &[f64]) -> Result<HaarDecomposition> {
    if x.is_empty() || !x.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "Haar transform needs a power-of-two length, got {}",
            x.len()
        )));
    }
    let mut approx = x.to_vec();
    let mut details = Vec::new();
    while approx.len() > 1 {
        let (a, d): (Vec<f64>, Vec<f64>) = approx
            .chunks_exact(2)
            .map(|p| ((p[0] + p[1]) * FRAC_1_SQRT_2, (p[0] - p[1]) * FRAC_1_SQRT_2))
            .unzip();
        details.push(d);
        approx = a;
    }
    Ok(HaarDecomposition {
        details,
        approximation: approx[0],
    })
}

/// Fraction of signal energy in each of the `levels` finest Haar detail
/// levels, after truncating to a power-of-two length and removing the mean.
pub fn wavelet_features(x: &[f64], levels: usize) -> Result<NamedValues> {
    require_len(x, 32.max(1 << levels))?;
    require_usable(x, 2)?;
    let n = 1usize << x.len().ilog2();
    let head = &x[..n];
    let mu = stats::mean(head);
    let centered: Vec<f64> = head.iter().map(|v| v - mu).collect();
    let dec = haar_dwt(&centered)?;
    let total = dec.energy();
    if !(total > 0.0) {
        return Err(Error::DegenerateInput("truncated series is constant"));
    }
    let mut out = NamedValues::new();
    for level in 1..=levels {
        let e: f64 = dec.details[level - 1].iter().map(|d| d * d).sum();
        out.push(format!("haar_energy_frac_level{level}"), Ok(e / total));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn alternation_lives_in_finest_level() {
        let x: Vec<f64> = (0..64).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let f = wavelet_features(&x, 4).unwrap();
        assert!((f.value("haar_energy_frac_level1").unwrap() - 1.0).abs() < 1e-10);
        assert!(f.value("haar_energy_frac_level2").unwrap() < 1e-10);
    }

    #[test]
    fn white_noise_energy_follows_coefficient_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x: Vec<f64> = (0..4096).map(|_| StandardNormal.sample(&mut rng)).collect();
        let f = wavelet_features(&x, 4).unwrap();
        for (level, share) in [0.5, 0.25, 0.125, 0.0625].into_iter().enumerate() {
            let got = f.value(&format!("haar_energy_frac_level{}", level + 1)).unwrap();
            assert!((got - share).abs() < 0.05, "level {}: {got}", level + 1);
        }
    }

    #[test]
    fn truncates_from_the_end() {
        // the first 32 points alternate; the 8 extra points would not
        let mut x: Vec<f64> = (0..32).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        x.extend([5.0, 5.0, 5.0, 5.0, -5.0, -5.0, -5.0, -5.0]);
        let f = wavelet_features(&x, 4).unwrap();
        assert!((f.value("haar_energy_frac_level1").unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(haar_dwt(&[1.0, 2.0, 3.0]).is_err());
    }
}
