#![no_main]
use libfuzzer_sys::fuzz_target;
use tsphen_cli::io::parse_series_column;
use tsphen_core::series::DEFAULT_MAX_MISSING_FRACTION;
use tsphen_core::trim_missing;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(values) = parse_series_column(text) {
        if let Ok(trimmed) = trim_missing(&values, DEFAULT_MAX_MISSING_FRACTION) {
            assert!(trimmed.iter().all(|v| !v.is_nan()));
        }
    }
});
