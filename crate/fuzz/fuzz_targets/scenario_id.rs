#![no_main]

use biphoton::experiments::{OutputFormat, ScenarioId, SweepVariable};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(id) = text.parse::<ScenarioId>() {
        assert_eq!(id.as_str(), text);
    }
    if let Ok(v) = text.parse::<SweepVariable>() {
        assert_eq!(v.as_str().parse::<SweepVariable>().ok(), Some(v));
    }
    let _ = text.parse::<OutputFormat>();
});
