#![no_main]
use libfuzzer_sys::fuzz_target;
use tsphen_cli::io::{feature_matrix_csv, read_feature_matrix};

// input: features.csv text, a NUL byte, quality.csv text
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (features, quality) = text.split_once('\0').unwrap_or((text, ""));
    if let Ok(m) = read_feature_matrix(features, quality) {
        let (f, q) = feature_matrix_csv(&m);
        let back = read_feature_matrix(&f, &q).expect("written matrix reads back");
        assert_eq!(back.series_ids, m.series_ids);
        for r in 0..m.n_rows() {
            assert_eq!(back.quality_row(r), m.quality_row(r));
            for c in 0..m.n_cols() {
                assert_eq!(back.value(r, c).to_bits(), m.value(r, c).to_bits());
            }
        }
    }
});
