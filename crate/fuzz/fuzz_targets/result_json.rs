#![no_main]

use biphoton::experiments::output::{parse_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rs) = parse_json(text) {
        if let Ok(again) = to_json(&rs) {
            let back = parse_json(&again).expect("re-read");
            assert_eq!(back.columns.len(), rs.columns.len());
        }
    }
});
