#![no_main]

use libfuzzer_sys::fuzz_target;
use ordjoin::{Involution, Poset};

fuzz_target!(|swaps: &str| {
    let n = Poset::zigzag_n();
    if let Ok(s) = Involution::parse_swaps(&n, swaps) {
        assert!((0..s.len()).all(|i| s.apply(s.apply(i)) == i));
    }
    let _ = Involution::parse_swaps(&Poset::antichain(10), swaps);
});
