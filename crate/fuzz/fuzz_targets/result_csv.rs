#![no_main]

use biphoton::experiments::output::{parse_csv, to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(rs) = parse_csv(text) else {
        return;
    };
    // Anything accepted must survive a write and a second read.
    let Ok(again) = to_csv(&rs) else {
        return;
    };
    let back = parse_csv(&again).expect("re-read");
    assert_eq!(back.columns.len(), rs.columns.len());
    for (a, b) in rs.columns.iter().zip(&back.columns) {
        assert_eq!(a.name, b.name);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()));
        }
    }
});
