#![no_main]

use libfuzzer_sys::fuzz_target;
use vortinv_cli::parse_fixture_spec;

fuzz_target!(|spec: &str| {
    if let Ok(f) = parse_fixture_spec(spec) {
        let shown = f.to_string();
        assert_eq!(parse_fixture_spec(&shown).expect("display parses"), f);
    }
});
