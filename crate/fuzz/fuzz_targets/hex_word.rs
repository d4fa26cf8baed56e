//! Hex word parsing, with and without an explicit width. Any word that
//! parses must survive a print/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use nmr_voting::config::parse_hex_word;

fuzz_target!(|input: (u8, &str)| {
    let (width, text) = input;
    for width in [None, Some(u32::from(width))] {
        if let Ok(word) = parse_hex_word(text, width) {
            let again =
                parse_hex_word(&word.to_string(), Some(word.width())).expect("printed word parses");
            assert_eq!(again, word);
        }
    }
});
