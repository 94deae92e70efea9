#![no_main]

use libfuzzer_sys::fuzz_target;
use ordjoin::format::parse_evaluate;
use ordjoin::{evaluate, GameStore, GrundyEngine};

fuzz_target!(|text: &str| {
    if let Ok(doc) = parse_evaluate(text) {
        if !doc.shape.is_empty() && doc.shape.len() <= 8 {
            let mut store = GameStore::new();
            let mut engine = GrundyEngine::new();
            // Quotient expansion is budgeted, so errors are fine; panics are not.
            let _ = evaluate(&doc.shape, &doc.leaf_sets, &mut store, &mut engine, 10_000);
        }
    }
});
