//! JSON config files. Accepted settings must re-serialize to a document
//! that parses back to the same JSON, and deriving run configs from them
//! must return errors rather than panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use nmr_voting::config::Settings;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(settings) = Settings::from_json(text) else {
        return;
    };
    let json = serde_json::to_string(&settings).unwrap();
    let again = Settings::from_json(&json).expect("echoed config parses");
    assert_eq!(serde_json::to_string(&again).unwrap(), json);

    let _ = settings.voter_kinds();
    let _ = settings.scenario_config();
    let _ = settings.ber_config();
});
