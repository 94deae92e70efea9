#![no_main]

use libfuzzer_sys::fuzz_target;
use ordjoin::format::parse_poset;
use ordjoin::modular_decompose;

fuzz_target!(|text: &str| {
    if let Ok(p) = parse_poset(text) {
        if !p.is_empty() && p.len() <= 64 {
            let t = modular_decompose(&p);
            assert!(t.recompose(p.labels()).same_order_by_label(&p));
        }
    }
});
