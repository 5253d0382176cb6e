#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = biphoton::Config::from_json_str(text) {
            assert!(cfg.geometry.validate().is_ok());
            assert!(cfg.source.sigma() > 0.0 && cfg.source.omega_cap() > 0.0);
        }
    }
});
