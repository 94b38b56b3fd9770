#![no_main]
use libfuzzer_sys::fuzz_target;
use tsphen_cli::ProjectConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ProjectConfig::parse(text) {
        assert!(cfg.n_perm > 0 && cfg.k_folds >= 2 && cfg.top_k > 0);
        assert!(cfg.regularization > 0.0);
    }
});
