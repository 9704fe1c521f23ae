#![no_main]

use libfuzzer_sys::fuzz_target;
use qsc_core::io::{generator_to_json, parse_generator};

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = parse_generator(data) {
        // Accepted documents must survive a write/read cycle unchanged.
        let again = parse_generator(generator_to_json(&f).as_bytes()).expect("reparse");
        assert_eq!(again, f);
        let _ = f.classify(1e-10);
    }
});
