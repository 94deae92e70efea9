#![no_main]

use libfuzzer_sys::fuzz_target;
use ordjoin::format::parse_game_doc;

fuzz_target!(|text: &str| {
    let _ = parse_game_doc(text);
});
