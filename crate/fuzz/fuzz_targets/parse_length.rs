#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(v) = biphoton::units::parse_length(text) {
            assert!(v.is_finite());
        }
    }
});
