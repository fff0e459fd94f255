#![no_main]

use libfuzzer_sys::fuzz_target;
use mmtrace_core::scenario::parse_scenario;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(config) = parse_scenario(text) else {
        return;
    };
    // Accepted documents must survive a serialization round trip.
    let again = parse_scenario(&config.to_toml()).expect("serialized scenario parses");
    assert_eq!(again, config);
    let _ = config.build_environment();
});
