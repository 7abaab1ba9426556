#![no_main]

use libfuzzer_sys::fuzz_target;
use vortinv_cli::parse_config;

fuzz_target!(|text: &str| {
    if let Ok(cfg) = parse_config(text, &[]) {
        // the echo must describe the same run
        let again = parse_config(&cfg.echo(), &[]).expect("echo parses");
        assert_eq!(again, cfg);
    }
});
