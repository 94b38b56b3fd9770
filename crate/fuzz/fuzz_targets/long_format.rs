#![no_main]
use libfuzzer_sys::fuzz_target;
use tsphen_cli::io::parse_long_format;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(series) = parse_long_format(text) {
        for values in series.values().flatten() {
            assert!(values.iter().flatten().all(|v| !v.is_nan()));
        }
    }
});
