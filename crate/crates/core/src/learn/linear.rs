//! Class-weighted one-vs-rest linear classifier.
//!
//! Each class gets a weight vector and bias trained to separate it from the
//! rest by minimizing an L2-regularized, observation-weighted logistic loss
//! with full-batch gradient descent. Observations are weighted by the
//! inverse frequency of their class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearConfig {
    pub regularization: f64,
    pub max_iter: usize,
    /// Stop once the relative change in loss falls below this.
    pub tol: f64,
}

impl Default for LinearConfig {
    fn default() -> Self {
        LinearConfig {
            regularization: 0.01,
            max_iter: 5000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub iterations: usize,
    pub loss: f64,
    /// False when the iteration budget ran out before the tolerance was met.
    pub converged: bool,
}

impl LinearModel {
    pub fn scores(&self, row: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| dot(w, row) + b)
            .collect()
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let s = self.scores(row);
        (0..s.len()).fold(0, |best, c| if s[c] > s[best] { c } else { best })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// log(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// N / (m · c_i) for an observation of class i, where m counts the classes
/// present and c_i is the size of class i.
pub fn class_balance_weights(labels: &[usize], n_classes: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count() as f64;
    let n = labels.len() as f64;
    labels
        .iter()
        .map(|&l| n / (present * counts[l] as f64))
        .collect()
}

/// Objective and gradient at `params`, laid out class by class as
/// `[w_0 .. w_{d-1}, b]`. For each class the data term is the weighted mean
/// of log(1 + exp(−y·score)) with y = ±1 for in/out of the class, and the
/// penalty is `regularization / 2 · |w|²` (the bias is not penalized).
pub fn weighted_logistic_loss(
    params: &[f64],
    rows: &[Vec<f64>],
    labels: &[usize],
    weights: &[f64],
    n_classes: usize,
    regularization: f64,
) -> (f64, Vec<f64>) {
    let d = rows.first().map_or(0, Vec::len);
    let stride = d + 1;
    assert_eq!(params.len(), n_classes * stride);
    let total_weight: f64 = weights.iter().sum();
    let mut loss = 0.0;
    let mut grad = vec![0.0; params.len()];

    for c in 0..n_classes {
        let block = &params[c * stride..(c + 1) * stride];
        let (w, b) = (&block[..d], block[d]);
        let g = &mut grad[c * stride..(c + 1) * stride];
        for ((row, &label), &obs_w) in rows.iter().zip(labels).zip(weights) {
            let y = if label == c { 1.0 } else { -1.0 };
            let margin = y * (dot(w, row) + b);
            loss += obs_w * softplus(-margin) / total_weight;
            // d/ds softplus(−y s) = −y σ(−y s)
            let coef = -y * sigmoid(-margin) * obs_w / total_weight;
            for (gj, xj) in g[..d].iter_mut().zip(row) {
                *gj += coef * xj;
            }
            g[d] += coef;
        }
        loss += 0.5 * regularization * dot(w, w);
        for (gj, wj) in g[..d].iter_mut().zip(w) {
            *gj += regularization * wj;
        }
    }
    (loss, grad)
}

/// Fits the class-weighted one-vs-rest model by gradient descent from zero
/// with step 1/L, L being a bound on the gradient's Lipschitz constant.
pub fn fit_weighted_linear(
    rows: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    config: &LinearConfig,
) -> Result<LinearModel> {
    if rows.is_empty() || rows.len() != labels.len() {
        return Err(Error::InvalidArgument("rows and labels must be non-empty and aligned".into()));
    }
    let d = rows[0].len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidArgument("ragged feature rows".into()));
    }
    if labels.iter().any(|&l| l >= n_classes) {
        return Err(Error::InvalidArgument("label out of range".into()));
    }
    let mut present = vec![false; n_classes];
    labels.iter().for_each(|&l| present[l] = true);
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(Error::Degenerate("need at least two classes to train".into()));
    }

    let weights = class_balance_weights(labels, n_classes);
    let max_sq_norm = rows.iter().map(|r| dot(r, r) + 1.0).fold(0.0, f64::max);
    let step = 1.0 / (0.25 * max_sq_norm + config.regularization);

    let mut params = vec![0.0; n_classes * (d + 1)];
    let (mut loss, mut grad) =
        weighted_logistic_loss(&params, rows, labels, &weights, n_classes, config.regularization);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= step * g;
        }
        let (next_loss, next_grad) =
            weighted_logistic_loss(&params, rows, labels, &weights, n_classes, config.regularization);
        let rel = (loss - next_loss).abs() / loss.abs().max(f64::MIN_POSITIVE);
        loss = next_loss;
        grad = next_grad;
        if rel < config.tol {
            converged = true;
            break;
        }
    }

    let stride = d + 1;
    Ok(LinearModel {
        weights: (0..n_classes)
            .map(|c| params[c * stride..c * stride + d].to_vec())
            .collect(),
        biases: (0..n_classes).map(|c| params[c * stride + d]).collect(),
        iterations,
        loss,
        converged,
    })
}
