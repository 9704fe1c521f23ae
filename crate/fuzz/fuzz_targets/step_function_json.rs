#![no_main]

use libfuzzer_sys::fuzz_target;
use qsc_core::io::{parse_step_function, step_function_to_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = parse_step_function(data) {
        let again = parse_step_function(step_function_to_json(&f).as_bytes()).expect("reparse");
        assert_eq!(again, f);
        let _ = f.exp_norm(0.0, f64::INFINITY);
    }
});
