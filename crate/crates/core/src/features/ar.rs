//! Autoregressive fits by the Yule–Walker equations.

use super::autocorr::acf;
use super::values::{require_len, require_usable, NamedValues};
use crate::error::{Error, Result};
use crate::series::zscore;

pub const DEFAULT_MAX_ORDER: usize = 8;

/// Reflection coefficients this close to ±1 mean the Toeplitz system is
/// numerically singular.
const SINGULAR_MARGIN: f64 = 1e-12;

/// Yule–Walker solution at one model order.
#[derive(Debug, Clone, PartialEq)]
pub struct ArFit {
    /// `coefs[k]` multiplies x_{t−k−1}.
    pub coefs: Vec<f64>,
    pub reflection: f64,
    /// Innovation variance as a fraction of the lag-0 autocovariance.
    pub resid_var_ratio: f64,
}

/// Levinson–Durbin recursion on autocovariances `r[0..=max_order]`,
/// returning the fit at every order 1..=max_order. Stops with
/// `NoConvergence` at the first order whose reflection coefficient reaches
/// the unit circle; the fits for lower orders are returned alongside.
pub fn levinson_durbin(r: &[f64], max_order: usize) -> (Vec<ArFit>, Option<Error>) {
    assert!(r.len() > max_order, "need autocovariances up to the model order");
    let mut fits = Vec::with_capacity(max_order);
    let mut coefs: Vec<f64> = Vec::with_capacity(max_order);
    let mut err = r[0];
    if !(err > 0.0) {
        return (fits, Some(Error::DegenerateInput("zero lag-0 autocovariance")));
    }
    for p in 1..=max_order {
        let acc: f64 = coefs
            .iter()
            .enumerate()
            .map(|(j, a)| a * r[p - 1 - j])
            .sum();
        let k = (r[p] - acc) / err;
        if !(k.abs() < 1.0 - SINGULAR_MARGIN) {
            return (fits, Some(Error::NoConvergence("singular Toeplitz system")));
        }
        let prev = coefs.clone();
        for j in 0..coefs.len() {
            coefs[j] = prev[j] - k * prev[prev.len() - 1 - j];
        }
        coefs.push(k);
        err *= 1.0 - k * k;
        fits.push(ArFit {
            coefs: coefs.clone(),
            reflection: k,
            resid_var_ratio: err / r[0],
        });
    }
    (fits, None)
}

/// AR(2) coefficients and residual variance, plus the AIC-best order among
/// 1..=max_order, all fitted to the z-scored series.
pub fn ar_features(x: &[f64], max_order: usize) -> Result<NamedValues> {
    if max_order < 2 {
        return Err(Error::InvalidArgument("max_order must be at least 2".into()));
    }
    require_len(x, 20.max(max_order + 2))?;
    require_usable(x, 2)?;
    let z = zscore(x)?;
    let r = acf(&z, max_order)?;
    let (fits, failure) = levinson_durbin(&r, max_order);

    let at = |order: usize| -> Result<&ArFit> {
        fits.get(order - 1).ok_or_else(|| failure.clone().unwrap())
    };

    let mut out = NamedValues::new();
    out.push("ar2_coef1", at(2).map(|f| f.coefs[0]));
    out.push("ar2_coef2", at(2).map(|f| f.coefs[1]));
    out.push("ar2_resid_var_ratio", at(2).map(|f| f.resid_var_ratio));

    let best = match &failure {
        Some(e) => Err(e.clone()),
        None => {
            let n = z.len() as f64;
            let aic = |p: usize, f: &ArFit| n * f.resid_var_ratio.ln() + 2.0 * p as f64;
            let (p, fit) = fits
                .iter()
                .enumerate()
                .map(|(i, f)| (i + 1, f))
                .fold(None::<(usize, &ArFit)>, |best, (p, f)| match best {
                    Some((bp, bf)) if aic(bp, bf) <= aic(p, f) => Some((bp, bf)),
                    _ => Some((p, f)),
                })
                .unwrap();
            Ok((p as f64, fit.resid_var_ratio))
        }
    };
    out.push("ar_best_order_aic", best.clone().map(|b| b.0));
    out.push("ar_best_resid_var_ratio", best.map(|b| b.1));
    Ok(out)
}
