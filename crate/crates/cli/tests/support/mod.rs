#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Output;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// AR(1) with unit-variance innovations, started from the stationary law.
pub fn ar1(rng: &mut ChaCha8Rng, phi: f64, n: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(n);
    let e0: f64 = StandardNormal.sample(rng);
    let mut prev = e0 / (1.0 - phi * phi).sqrt();
    x.push(prev);
    for _ in 1..n {
        let e: f64 = StandardNormal.sample(rng);
        prev = phi * prev + e;
        x.push(prev);
    }
    x
}

pub fn write_series(dir: &Path, id: &str, values: &[Option<f64>]) {
    let body: String = values
        .iter()
        .map(|v| match v {
            Some(x) => format!("{x:.17e}\n"),
            None => "NaN\n".to_string(),
        })
        .collect();
    std::fs::write(dir.join(format!("{id}.csv")), format!("value\n{body}")).unwrap();
}

pub fn write_labels(path: &Path, labels: &[(String, String)]) {
    let body: String = labels.iter().map(|(a, b)| format!("{a},{b}\n")).collect();
    std::fs::write(path, format!("series_id,label\n{body}")).unwrap();
}

/// A directory of AR(1) series: `per_class` series for each (class, phi).
pub fn ar_dataset(dir: &Path, classes: &[(&str, f64)], per_class: usize, len: usize, seed: u64) {
    std::fs::create_dir_all(dir).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = Vec::new();
    for (class, phi) in classes {
        for i in 0..per_class {
            let id = format!("{class}_{i:03}");
            let x = ar1(&mut rng, *phi, len);
            write_series(dir, &id, &x.into_iter().map(Some).collect::<Vec<_>>());
            labels.push((id, class.to_string()));
        }
    }
    write_labels(&dir.join("labels.csv"), &labels);
}

pub fn tsphen(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_tsphen"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn files_in(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}
