#![no_main]

use libfuzzer_sys::fuzz_target;
use ordjoin::format::parse_join;

fuzz_target!(|text: &str| {
    let _ = parse_join(text);
});
