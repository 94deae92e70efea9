//! One check per acceptance criterion; each prints a PASS or FAIL line.
//!
//! Run with `cargo test -p ordjoin --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use ordjoin::eval::{dsum_grundy_set, osum_grundy_set, reduce_symmetry, reduce_zero_upper};
use ordjoin::grundy::context_game;
use ordjoin::join::DEFAULT_BUDGET;
use ordjoin::poset::{weakly_op_involutions, INVOLUTION_LIMIT};
use ordjoin::{
    evaluate, ex, grundy_of_join, modular_decompose, oracle_grundy, GameId, GameStore, GrundyEngine, GrundySet,
    Involution, JoinError, JoinPosition, MdTree, Outcome, Poset,
};
use rand::Rng;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut store = GameStore::new();
    let mut engine = GrundyEngine::new();
    let (mut prime, mut nonzero, mut positions) = (0, 0, 0);
    for k in 0..500 {
        let p = random_join(&mut store, &mut rng, 5, 12);
        let fast = grundy_of_join(&p, &mut store, &mut engine, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let g = p.to_game(&mut store, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let slow = oracle_grundy(&store, g);
        check(fast == slow, || format!("instance {k}: grundy_of_join {fast}, oracle {slow}"))?;
        prime += usize::from(modular_decompose(p.shape()).count_indecomposable() > 0);
        nonzero += usize::from(slow > 0);
        positions += store.subgame_count(g);
    }
    let t = start.elapsed();
    println!("     {prime} indecomposable shapes, {nonzero} nonzero values, {positions} positions");
    check(prime >= 10 && nonzero >= 100, || "random instances are degenerate".into())?;
    check(t < Duration::from_secs(60), || format!("took {t:?}"))
}

fn sprague_grundy() -> Result<(), String> {
    let mut rng = rng(2);
    let mut store = GameStore::new();
    for k in 0..1000 {
        let g = random_game(&mut store, &mut rng, 12);
        let h = random_game(&mut store, &mut rng, 12);
        let s = store.dsum(g, h);
        let (a, b, c) = (oracle_grundy(&store, g), oracle_grundy(&store, h), oracle_grundy(&store, s));
        check(c == a ^ b, || format!("pair {k}: {c} != {a} xor {b}"))?;
    }
    Ok(())
}

fn colon_formula() -> Result<(), String> {
    let mut rng = rng(3);
    let mut store = GameStore::new();
    for k in 0..1000 {
        let g = random_game(&mut store, &mut rng, 12);
        let h = random_game(&mut store, &mut rng, 12);
        let s = store.osum(g, h);
        let set: GrundySet = oracle_grundy_set(&store, g).into_iter().collect();
        let want = ex(oracle_grundy(&store, h), &set);
        let got = oracle_grundy(&store, s);
        check(got == want, || format!("pair {k}: {got} != ex {want}"))?;
    }
    Ok(())
}

fn colon_example() -> Result<(), String> {
    let mut store = GameStore::new();
    let zero = store.nim_heap(0);
    let one = store.nim_heap(1);
    let a = store.osum(zero, one);
    let two_ones = store.dsum(one, one);
    let b = store.osum(two_ones, one);
    let (x, y) = (oracle_grundy(&store, a), oracle_grundy(&store, b));
    check(x == 1 && y == 2, || format!("got {x} and {y}"))?;
    check(oracle_grundy(&store, zero) == oracle_grundy(&store, two_ones), || "components differ in Γ0".into())
}

/// A random join with at least one nonempty component and a maximal element of its support.
fn join_with_top(store: &mut GameStore, rng: &mut rand::rngs::StdRng) -> (JoinPosition, usize) {
    loop {
        let p = random_join(store, rng, 5, 10);
        let support = p.support();
        let tops: Vec<usize> =
            support.iter().copied().filter(|&i| !support.iter().any(|&j| p.shape().lt(i, j))).collect();
        if !tops.is_empty() {
            let i = tops[rng.gen_range(0..tops.len())];
            return (p, i);
        }
    }
}

fn special_substitution() -> Result<(), String> {
    let mut rng = rng(5);
    let mut store = GameStore::new();
    for k in 0..200 {
        let (p, i) = join_with_top(&mut store, &mut rng);
        let v = oracle_grundy(&store, p.component(i));
        let h = game_with_grundy(&mut store, &mut rng, v, 6);
        let q = p.with_component(i, h);
        let (a, b) = (join_grundy(&store, &p), join_grundy(&store, &q));
        check(a == b, || format!("equal instance {k}: {a} != {b}"))?;
    }
    for k in 0..200 {
        let (p, i) = join_with_top(&mut store, &mut rng);
        let v = oracle_grundy(&store, p.component(i));
        let w = (v + rng.gen_range(1..4)) % 5;
        let w = if w == v { v + 1 } else { w };
        let h = game_with_grundy(&mut store, &mut rng, w, 6);
        let q = p.with_component(i, h);
        let (a, b) = (join_grundy(&store, &p), join_grundy(&store, &q));
        check(a != b, || format!("converse instance {k}: both {a}"))?;
    }
    Ok(())
}

fn general_substitution() -> Result<(), String> {
    let mut rng = rng(6);
    let mut store = GameStore::new();
    for k in 0..200 {
        let p = random_join(&mut store, &mut rng, 5, 10);
        let comps: Vec<GameId> = p
            .components()
            .iter()
            .map(|&g| {
                let set: GrundySet = oracle_grundy_set(&store, g).into_iter().collect();
                game_with_grundy_set(&mut store, &mut rng, &set)
            })
            .collect();
        let q = JoinPosition::new(p.shape().clone(), comps).unwrap();
        let (a, b) = (join_grundy_set(&store, &p), join_grundy_set(&store, &q));
        check(a == b, || format!("instance {k}: {a:?} != {b:?}"))?;
    }
    Ok(())
}

fn outcome_equivalence() -> Result<(), String> {
    let mut rng = rng(7);
    let mut store = GameStore::new();
    let mut engine = GrundyEngine::new();
    let mut done = 0;
    while done < 100 {
        let g = random_game(&mut store, &mut rng, 12);
        let h = random_game(&mut store, &mut rng, 12);
        let (a, b) = (engine.grundy_set(&store, g), engine.grundy_set(&store, h));
        if a == b {
            continue;
        }
        let bound = a.iter().chain(b.iter()).max().unwrap_or(0) + 2;
        let (lambda, rho) = engine
            .distinguish_by_context(&store, g, h, bound)
            .ok_or_else(|| format!("no witness for {a} vs {b} at bound {bound}"))?;
        let cg = context_game(&mut store, g, lambda as usize, rho as usize);
        let ch = context_game(&mut store, h, lambda as usize, rho as usize);
        let (og, oh) = (Outcome::of_grundy(oracle_grundy(&store, cg)), Outcome::of_grundy(oracle_grundy(&store, ch)));
        check(og != oh, || format!("witness ({lambda}, {rho}) for {a} vs {b} gives {og} twice"))?;
        done += 1;
    }
    Ok(())
}

fn reductions() -> Result<(), String> {
    let mut rng = rng(8);
    let mut store = GameStore::new();
    let mut engine = GrundyEngine::new();
    let mut done = 0;
    while done < 200 {
        let mut p = random_join(&mut store, &mut rng, 5, 10);
        for i in 0..p.shape().len() {
            if rng.gen_bool(0.5) {
                let z = game_with_grundy(&mut store, &mut rng, 0, 6);
                p = p.with_component(i, z);
            }
        }
        let r = reduce_zero_upper(&p, &store, &mut engine);
        if r.shape().len() == p.shape().len() {
            continue;
        }
        let (a, b) = (join_grundy(&store, &p), join_grundy(&store, &r));
        check(a == b, || format!("zero-upper instance {done}: {a} != {b}"))?;
        done += 1;
    }
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(2..=6);
        let shape = random_poset(&mut rng, n);
        let candidates: Vec<Involution> = weakly_op_involutions(&shape, INVOLUTION_LIMIT)
            .unwrap()
            .into_iter()
            .filter(|s| !s.is_identity())
            .filter(|s| s.fixed_points().iter().all(|&f| shape.below(f).ones().all(|b| s.apply(b) == b)))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let sigma = &candidates[rng.gen_range(0..candidates.len())];
        let mut comps = vec![GameId::ZERO; n];
        for i in sigma.fixed_points() {
            comps[i] = random_game(&mut store, &mut rng, 8);
        }
        for (i, j) in sigma.swaps() {
            comps[i] = random_game(&mut store, &mut rng, 8);
            let set: GrundySet = oracle_grundy_set(&store, comps[i]).into_iter().collect();
            comps[j] = game_with_grundy_set(&mut store, &mut rng, &set);
        }
        let p = JoinPosition::new(shape, comps).unwrap();
        let r = reduce_symmetry(&p, sigma, &store, &mut engine).map_err(|e| e.to_string())?;
        let (a, b) = (join_grundy(&store, &p), join_grundy(&store, &r));
        check(a == b, || format!("symmetry instance {done}: {a} != {b}"))?;
        if sigma.fixed_points().is_empty() {
            check(a == 0, || format!("fixed-point-free instance {done}: Γ0 {a}"))?;
        }
        done += 1;
    }
    Ok(())
}

fn has_proper_module(p: &Poset) -> bool {
    let n = p.len();
    (1u32..(1 << n) - 1).filter(|m| m.count_ones() >= 2).any(|m| {
        (0..n).filter(|&x| m >> x & 1 == 0).all(|x| {
            let inside: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            let above = inside.iter().all(|&i| p.lt(i, x));
            let below = inside.iter().all(|&i| p.lt(x, i));
            let apart = inside.iter().all(|&i| !p.comparable(i, x));
            above || below || apart
        })
    })
}

fn n_facts() -> Result<(), String> {
    let n = Poset::zigzag_n();
    let invs = weakly_op_involutions(&n, INVOLUTION_LIMIT).map_err(|e| e.to_string())?;
    check(invs.len() == 3, || format!("{} involutions", invs.len()))?;
    check(!has_proper_module(&n), || "N has a proper module".into())?;
    check(matches!(modular_decompose(&n), MdTree::Indecomposable { .. }), || "not indecomposable".into())?;

    // Poset game on N by brute force over the 16 sets of remaining elements.
    let mut value = [0u64; 16];
    for mask in 0..16usize {
        let mut seen = Vec::new();
        for i in (0..4).filter(|&i| mask >> i & 1 == 1) {
            let removed = (0..4).filter(|&j| j == i || n.lt(i, j)).fold(0, |m, j| m | 1 << j);
            seen.push(value[mask & !removed]);
        }
        value[mask] = (0..).find(|v| !seen.contains(v)).unwrap();
    }
    check(value[15] == 0, || format!("brute force Γ0 {}", value[15]))?;

    let mut store = GameStore::new();
    let mut engine = GrundyEngine::new();
    let p = JoinPosition::poset_game(n.clone(), &mut store);
    let before = store.len();
    let sigma = Involution::parse_swaps(&n, "1:3,2:4").map_err(|e| e.to_string())?;
    let r = reduce_symmetry(&p, &sigma, &store, &mut engine).map_err(|e| e.to_string())?;
    check(r.shape().is_empty(), || "reduction left elements".into())?;
    check(store.len() == before, || "certificate expanded positions".into())
}

fn sum_rules() -> Result<(), String> {
    let mut store = GameStore::new();
    let sets = all_small_sets(6, 4);
    let games: Vec<GameId> = sets
        .iter()
        .map(|s| {
            let heaps: Vec<GameId> = s.iter().map(|v| store.nim_heap(v as usize)).collect();
            store.intern(&heaps).unwrap()
        })
        .collect();
    for (a, &g) in sets.iter().zip(&games) {
        for (b, &h) in sets.iter().zip(&games) {
            let d = store.dsum(g, h);
            let o = store.osum(g, h);
            let (dd, oo) = (oracle_grundy_set(&store, d), oracle_grundy_set(&store, o));
            check(set_of(&dsum_grundy_set(a, b)) == dd, || format!("dsum {a} {b}"))?;
            check(set_of(&osum_grundy_set(a, b)) == oo, || format!("osum {a} {b}"))?;
        }
    }
    Ok(())
}

fn series_parallel_performance() -> Result<(), String> {
    let mut rng = rng(11);
    let shape = random_series_parallel(&mut rng, 2000);
    let leaves: Vec<GrundySet> = (0..shape.len())
        .map(|_| {
            let len = rng.gen_range(1..=4);
            (0..len).map(|_| rng.gen_range(0..16)).collect()
        })
        .collect();
    let mut store = GameStore::new();
    let mut engine = GrundyEngine::new();
    let start = Instant::now();
    let eval = evaluate(&shape, &leaves, &mut store, &mut engine, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    check(t < Duration::from_secs(5), || format!("evaluate took {t:?}"))?;
    check(eval.stats.fallback_nodes == 0, || format!("{} fallback nodes", eval.stats.fallback_nodes))?;
    let comps: Vec<GameId> = leaves.iter().map(|s| ordjoin::eval::canonical_game(&mut store, s)).collect();
    let p = JoinPosition::new(shape, comps).unwrap();
    match p.to_game(&mut store, DEFAULT_BUDGET) {
        Err(JoinError::Budget { .. }) => Ok(()),
        other => Err(format!("naive expansion did not hit the budget: {other:?}")),
    }
}

fn recomposition() -> Result<(), String> {
    for n in 1..=6 {
        for p in all_natural_posets(n) {
            let t = modular_decompose(&p);
            check(t.recompose(p.labels()).same_order_by_label(&p), || format!("{:?}", p.order_pairs()))?;
        }
    }
    let mut rng = rng(12);
    for k in 0..200 {
        let n = rng.gen_range(7..=12);
        let p = random_poset(&mut rng, n);
        let t = modular_decompose(&p);
        check(t.recompose(p.labels()).same_order_by_label(&p), || format!("random poset {k}"))?;
    }
    Ok(())
}

type Criterion = fn() -> Result<(), String>;

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("oracle equivalence on 500 random joins", oracle_equivalence),
        ("xor rule on 1000 random sums", sprague_grundy),
        ("colon formula on 1000 random ordinal sums", colon_formula),
        ("<0>:<1> = 1, (<1>+<1>):<1> = 2", colon_example),
        ("special substitution and converse", special_substitution),
        ("general substitution preserves the Grundy set", general_substitution),
        ("distinguishing contexts for differing Grundy sets", outcome_equivalence),
        ("zero-upper-set and symmetry reductions", reductions),
        ("facts about N", n_facts),
        ("closed-form Grundy sets of sums", sum_rules),
        ("series-parallel shape with 2000 elements", series_parallel_performance),
        ("modular decomposition recomposes", recomposition),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({t:.2?})", k + 1),
            Err(e) => {
                println!("FAIL {:>2} {name}: {e}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
