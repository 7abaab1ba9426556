#![no_main]

use libfuzzer_sys::fuzz_target;
use vortinv_cli::{parse_field_csv, write_field_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(field) = parse_field_csv(text) {
        let back = parse_field_csv(&write_field_csv(&field, None)).expect("written field parses");
        assert_eq!(back, field);
    }
});
