#![no_main]
use libfuzzer_sys::fuzz_target;
use tsphen_core::features::extract_series;
use tsphen_core::{default_catalog, QualityCode};

// little-endian f64s
fuzz_target!(|data: &[u8]| {
    let x: Vec<f64> = data
        .chunks_exact(8)
        .take(2048)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let catalog = default_catalog();
    for (v, q) in extract_series(&x, &catalog) {
        if q == QualityCode::Ok {
            assert!(v.is_finite());
        }
    }
});
