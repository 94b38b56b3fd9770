#![no_main]
use libfuzzer_sys::fuzz_target;
use tsphen_core::features::extract_series;
use tsphen_core::FeatureCatalog;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(catalog) = FeatureCatalog::from_json(text) {
        let again = FeatureCatalog::from_json(&catalog.to_json()).expect("round trip");
        assert_eq!(again.specs(), catalog.specs());
        let x: Vec<f64> = (0..64).map(|i| ((i * 37) % 11) as f64).collect();
        assert_eq!(extract_series(&x, &catalog).len(), catalog.len());
    }
});
