#![no_main]
use libfuzzer_sys::fuzz_target;
use tsphen_cli::io::{labels_csv, parse_labels};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(labels) = parse_labels(text) {
        let pairs: Vec<(String, String)> = labels.into_iter().collect();
        let again = parse_labels(&labels_csv(&pairs)).expect("written labels parse");
        assert_eq!(again.into_iter().collect::<Vec<_>>(), pairs);
    }
});
