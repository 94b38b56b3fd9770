//! Independent reference implementations and simulators shared by the
//! integration tests. Nothing here calls into the library under test.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// All-pairs template counting (B for length m, A for length m+1) over the
/// N−m templates, Chebyshev distance ≤ r.
pub fn brute_sampen_counts(x: &[f64], m: usize, r: f64) -> (u64, u64) {
    let n = x.len() - m;
    let (mut b, mut a) = (0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let dm = (0..m).map(|k| (x[i + k] - x[j + k]).abs()).fold(0.0, f64::max);
            if dm <= r {
                b += 1;
                if dm.max((x[i + m] - x[j + m]).abs()) <= r {
                    a += 1;
                }
            }
        }
    }
    (b, a)
}

pub fn brute_sampen(x: &[f64], m: usize, r: f64) -> Option<f64> {
    let (b, a) = brute_sampen_counts(x, m, r);
    (a > 0 && b > 0).then(|| -(a as f64 / b as f64).ln())
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Yule–Walker coefficients of order p from autocovariances r[0..=p].
pub fn yule_walker_dense(r: &[f64], p: usize) -> Vec<f64> {
    let toeplitz = (0..p)
        .map(|i| (0..p).map(|j| r[i.abs_diff(j)]).collect())
        .collect();
    dense_solve(toeplitz, r[1..=p].to_vec())
}

/// Biased autocovariance, lags 0..=max_lag.
pub fn autocovariance(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mu = x.iter().sum::<f64>() / n as f64;
    (0..=max_lag)
        .map(|k| (0..n - k).map(|t| (x[t] - mu) * (x[t + k] - mu)).sum::<f64>() / n as f64)
        .collect()
}

/// Benjamini–Hochberg from the definitions, for p-values given in tenths
/// and a level given in hundredths so the rejection rule is decided in
/// exact integer arithmetic. Returns (q-values, rejections).
pub fn bh_grid_oracle(tenths: &[u32], level_hundredths: u32) -> (Vec<f64>, Vec<bool>) {
    let n = tenths.len();
    // rank of p_k: number of p-values ≤ p_k (the last position among ties)
    let rank = |k: usize| tenths.iter().filter(|&&t| t <= tenths[k]).count();
    let q = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| tenths[k] >= tenths[i])
                .map(|k| n as f64 * (tenths[k] as f64 / 10.0) / rank(k) as f64)
                .fold(1.0, f64::min)
        })
        .collect();
    // step-up: largest k with p_(k) ≤ k·α/n, i.e. 10·p·100·n ≤ k·α·100·10
    let mut sorted = tenths.to_vec();
    sorted.sort_unstable();
    let k_star = (1..=n)
        .filter(|&k| sorted[k - 1] as u64 * 10 * n as u64 <= k as u64 * level_hundredths as u64)
        .max();
    let reject = match k_star {
        Some(k) => tenths.iter().map(|&t| t <= sorted[k - 1]).collect(),
        None => vec![false; n],
    };
    (q, reject)
}

/// Exact permutation p-value P(stat(π(labels)) ≥ stat(labels)) under a
/// uniform label permutation, by enumerating distinct label arrangements
/// (each is hit by the same number of permutations).
pub fn exact_permutation_p(labels: &[usize], stat: impl Fn(&[usize]) -> f64) -> f64 {
    let observed = stat(labels);
    let mut arrangement = labels.to_vec();
    arrangement.sort_unstable();
    let (mut total, mut hits) = (0u64, 0u64);
    loop {
        total += 1;
        if stat(&arrangement) >= observed {
            hits += 1;
        }
        if !next_permutation(&mut arrangement) {
            break;
        }
    }
    hits as f64 / total as f64
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn white_noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn random_walk(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    white_noise(rng, n)
        .into_iter()
        .scan(0.0, |s, e| {
            *s += e;
            Some(*s)
        })
        .collect()
}

/// AR(1) with unit-variance innovations, started from the stationary law.
pub fn ar1(rng: &mut ChaCha8Rng, phi: f64, n: usize) -> Vec<f64> {
    let e = white_noise(rng, n);
    let mut x = Vec::with_capacity(n);
    let mut prev = e[0] / (1.0 - phi * phi).sqrt();
    x.push(prev);
    for &v in &e[1..] {
        prev = phi * prev + v;
        x.push(prev);
    }
    x
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random()).collect()
}
