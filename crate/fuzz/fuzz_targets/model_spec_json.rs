#![no_main]

use libfuzzer_sys::fuzz_target;
use qsc_core::io::{model_spec_to_json, parse_model_spec};

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = parse_model_spec(data) {
        let again = parse_model_spec(model_spec_to_json(&spec).as_bytes()).expect("reparse");
        assert_eq!(again, spec);
        let _ = spec.build();
    }
});
