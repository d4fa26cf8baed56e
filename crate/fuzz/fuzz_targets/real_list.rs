#![no_main]

use libfuzzer_sys::fuzz_target;
use nmr_voting::config::parse_real_list;

fuzz_target!(|text: &str| {
    if let Ok(values) = parse_real_list(text) {
        assert_eq!(values.len(), text.split(',').count());
    }
});
