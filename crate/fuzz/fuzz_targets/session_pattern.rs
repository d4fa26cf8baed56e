#![no_main]

use libfuzzer_sys::fuzz_target;
use nmr_voting::harness::SessionPattern;

fuzz_target!(|text: &str| {
    if let Ok(pattern) = text.parse::<SessionPattern>() {
        assert_eq!(pattern.len(), text.chars().count());
        let printed = pattern.to_string();
        assert_eq!(printed.parse::<SessionPattern>().unwrap(), pattern);
    }
});
