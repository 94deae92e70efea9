#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ordjoin::{oracle_grundy, GameId, GameStore, GrundySet, JoinPosition, Nat, Poset};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random game on at most `max_positions` positions: node `k` of a random
/// DAG takes a random subset of nodes `0..k` as options, the root is last.
pub fn random_game(store: &mut GameStore, rng: &mut StdRng, max_positions: usize) -> GameId {
    let n = rng.gen_range(1..=max_positions.max(1));
    let density = rng.gen_range(0.15..0.6);
    let mut nodes: Vec<GameId> = Vec::with_capacity(n);
    for k in 0..n {
        let mut opts: Vec<GameId> = (0..k).filter(|_| rng.gen_bool(density)).map(|j| nodes[j]).collect();
        if k > 0 && opts.is_empty() && rng.gen_bool(0.7) {
            opts.push(nodes[rng.gen_range(0..k)]);
        }
        nodes.push(store.intern(&opts).unwrap());
    }
    *nodes.last().unwrap()
}

/// A game with Grundy number `v` built as a random game plus a nim heap.
pub fn game_with_grundy(store: &mut GameStore, rng: &mut StdRng, v: Nat, max_positions: usize) -> GameId {
    let r = random_game(store, rng, max_positions);
    let heap = store.nim_heap((oracle_grundy(store, r) ^ v) as usize);
    store.dsum(r, heap)
}

/// A game with Grundy set `set`, whose options are non-canonical games.
pub fn game_with_grundy_set(store: &mut GameStore, rng: &mut StdRng, set: &GrundySet) -> GameId {
    let mut opts = Vec::new();
    for v in set.iter() {
        for _ in 0..rng.gen_range(1..=2) {
            opts.push(game_with_grundy(store, rng, v, 4));
        }
    }
    store.intern(&opts).unwrap()
}

/// Γ1 from the oracle, via the options.
pub fn oracle_grundy_set(store: &GameStore, g: GameId) -> BTreeSet<Nat> {
    store.options(g).iter().map(|&o| oracle_grundy(store, o)).collect()
}

pub fn set_of(gs: &GrundySet) -> BTreeSet<Nat> {
    gs.iter().collect()
}

/// Every game with at most `n` positions, by enumerating topologically
/// labelled DAGs; hash-consing removes the duplicates.
pub fn all_games(store: &mut GameStore, n: usize) -> Vec<GameId> {
    let mut found = BTreeSet::new();
    for size in 1..=n {
        let choices: Vec<u32> = (0..size).map(|k| 1u32 << k).collect();
        let mut masks = vec![0u32; size];
        loop {
            let mut nodes: Vec<GameId> = Vec::with_capacity(size);
            for (k, &mask) in masks.iter().enumerate() {
                let opts: Vec<GameId> = (0..k).filter(|&j| mask >> j & 1 == 1).map(|j| nodes[j]).collect();
                nodes.push(store.intern(&opts).unwrap());
            }
            found.insert(nodes[size - 1]);
            let mut k = 0;
            while k < size {
                masks[k] += 1;
                if masks[k] < choices[k] {
                    break;
                }
                masks[k] = 0;
                k += 1;
            }
            if k == size {
                break;
            }
        }
    }
    found.into_iter().collect()
}

/// Random poset on `n` elements; labels `1..n` in a shuffled linear extension.
pub fn random_poset(rng: &mut StdRng, n: usize) -> Poset {
    let density = rng.gen_range(0.1..0.6);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[a], perm[b]));
            }
        }
    }
    Poset::from_index_pairs(n, &pairs).unwrap()
}

/// Random series-parallel poset on `n` elements.
pub fn random_series_parallel(rng: &mut StdRng, n: usize) -> Poset {
    // Build a random binary tree of splits, then fold bottom-up.
    enum Node {
        Leaf,
        Join(bool, usize, usize),
    }
    let mut nodes: Vec<Node> = Vec::new();
    let mut todo = vec![(n, usize::MAX, false)];
    while let Some((size, parent, right)) = todo.pop() {
        let id = nodes.len();
        if size == 1 {
            nodes.push(Node::Leaf);
        } else {
            let left = rng.gen_range(1..size);
            nodes.push(Node::Join(rng.gen_bool(0.5), usize::MAX, usize::MAX));
            todo.push((left, id, false));
            todo.push((size - left, id, true));
        }
        if parent != usize::MAX {
            if let Node::Join(_, l, r) = &mut nodes[parent] {
                if right {
                    *r = id;
                } else {
                    *l = id;
                }
            }
        }
    }
    let mut built: Vec<Option<Poset>> = (0..nodes.len()).map(|_| None).collect();
    for id in (0..nodes.len()).rev() {
        let p = match nodes[id] {
            Node::Leaf => Poset::antichain(1),
            Node::Join(series, l, r) => {
                let a = built[l].take().unwrap();
                let b = built[r].take().unwrap();
                let quotient = if series { Poset::chain(2) } else { Poset::antichain(2) };
                ordjoin::poset::modular_compose(&quotient, &[a, b]).unwrap()
            }
        };
        built[id] = Some(p);
    }
    let p = built[0].take().unwrap();
    let labels = (1..=p.len()).map(|k| k.to_string()).collect();
    p.relabel(labels).unwrap()
}

/// All strict orders on `0..n` compatible with the natural order, deduplicated.
pub fn all_natural_posets(n: usize) -> Vec<Poset> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << slots.len() {
        let pairs: Vec<(usize, usize)> =
            slots.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        let p = Poset::from_index_pairs(n, &pairs).unwrap();
        if seen.insert(p.order_pairs()) {
            out.push(p);
        }
    }
    out
}

pub fn random_join(store: &mut GameStore, rng: &mut StdRng, max_elements: usize, max_positions: usize) -> JoinPosition {
    let n = rng.gen_range(1..=max_elements);
    let shape = random_poset(rng, n);
    let comps = (0..n)
        .map(|_| if rng.gen_bool(0.15) { GameId::ZERO } else { random_game(store, rng, max_positions) })
        .collect();
    JoinPosition::new(shape, comps).unwrap()
}

/// Plays the join directly on component vectors, without interning positions.
pub struct JoinOracle<'a> {
    store: &'a GameStore,
    shape: &'a Poset,
    memo: HashMap<Vec<GameId>, Nat>,
}

impl<'a> JoinOracle<'a> {
    pub fn new(store: &'a GameStore, shape: &'a Poset) -> Self {
        JoinOracle { store, shape, memo: HashMap::new() }
    }

    fn options(&self, comps: &[GameId]) -> Vec<Vec<GameId>> {
        let mut out = Vec::new();
        for i in 0..comps.len() {
            for &o in self.store.options(comps[i]) {
                let mut next = comps.to_vec();
                next[i] = o;
                for (j, c) in next.iter_mut().enumerate() {
                    if self.shape.lt(i, j) {
                        *c = GameId::ZERO;
                    }
                }
                out.push(next);
            }
        }
        out
    }

    pub fn grundy(&mut self, comps: &[GameId]) -> Nat {
        if let Some(&v) = self.memo.get(comps) {
            return v;
        }
        let values: BTreeSet<Nat> = self.options(comps).iter().map(|n| self.grundy(n)).collect();
        let v = (0..).find(|x| !values.contains(x)).unwrap();
        self.memo.insert(comps.to_vec(), v);
        v
    }

    pub fn grundy_set(&mut self, comps: &[GameId]) -> BTreeSet<Nat> {
        self.options(comps).iter().map(|n| self.grundy(n)).collect()
    }
}

pub fn join_grundy(store: &GameStore, p: &JoinPosition) -> Nat {
    JoinOracle::new(store, p.shape()).grundy(p.components())
}

pub fn join_grundy_set(store: &GameStore, p: &JoinPosition) -> BTreeSet<Nat> {
    JoinOracle::new(store, p.shape()).grundy_set(p.components())
}

/// Random Grundy set with values below `bound` and at most `max_len` members.
pub fn random_set(rng: &mut StdRng, bound: Nat, max_len: usize) -> GrundySet {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..bound)).collect()
}

/// Subsets of `0..bound` with at most `max_len` members.
pub fn all_small_sets(bound: Nat, max_len: usize) -> Vec<GrundySet> {
    (0u64..1 << bound)
        .filter(|m| m.count_ones() as usize <= max_len)
        .map(|m| (0..bound).filter(|&v| m >> v & 1 == 1).collect())
        .collect()
}
