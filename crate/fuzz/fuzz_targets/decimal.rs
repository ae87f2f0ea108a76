#![no_main]

use libfuzzer_sys::fuzz_target;

use denumerant::input::{format_count, parse_decimal};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(value) = parse_decimal(text, "b") {
        let canonical = format_count(&value);
        assert_eq!(canonical.trim_start_matches('0'), text.trim_start_matches('0'));
        assert_eq!(parse_decimal(&canonical, "b").unwrap(), value);
    }
});
