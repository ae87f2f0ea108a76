#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigUint;

use denumerant::table::{table_from_str, table_to_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Keep the fuzzer away from documents that ask for millions of rows.
    if text.len() > 1 << 16 {
        return;
    }
    if let Ok(table) = table_from_str(text) {
        let rendered = table_to_string(&table);
        let reloaded = table_from_str(&rendered).expect("rendered table reloads");
        assert_eq!(reloaded, table);
        assert_eq!(table.query(&BigUint::from(0u32)), BigUint::from(1u32));
    }
});
