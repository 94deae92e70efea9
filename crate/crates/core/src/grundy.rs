//! Grundy numbers, Grundy sets and the higher Γk values of stored games.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::game::{GameId, GameStore};
use crate::ordinal::{ex, mex, nim_add, GrundySet, Nat};

/// Normal-play outcome class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// The previous player (the one who just moved) wins.
    P,
    /// The next player to move wins.
    N,
}

impl Outcome {
    pub fn of_grundy(value: Nat) -> Self {
        if value == 0 {
            Outcome::P
        } else {
            Outcome::N
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::P => "P",
            Outcome::N => "N",
        })
    }
}

/// A hash-consed Γk value. Depth 0 carries a Grundy number; depth k ≥ 1 a set
/// of depth k−1 values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrundyValue {
    depth: u32,
    id: u64,
}

impl GrundyValue {
    pub fn depth(self) -> u32 {
        self.depth
    }
}

/// Owned tree form of a [`GrundyValue`], for display and serialization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NestedValue {
    Number(Nat),
    Set(Vec<NestedValue>),
}

impl fmt::Display for NestedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NestedValue::Number(n) => write!(f, "{n}"),
            NestedValue::Set(items) => {
                f.write_str("{")?;
                for (k, v) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Memo tables for one [`GameStore`]. Using an engine with a different store
/// than the one it was first used with gives meaningless results.
#[derive(Debug, Default, Clone)]
pub struct GrundyEngine {
    numbers: Vec<Option<Nat>>,
    // levels[k - 1] holds the Γk values by game index.
    levels: Vec<Vec<Option<u64>>>,
    // interned member lists of depth-k values, k ≥ 1
    sets: Vec<SetTable>,
}

#[derive(Debug, Default, Clone)]
struct SetTable {
    members: Vec<Box<[u64]>>,
    index: HashMap<Box<[u64]>, u64>,
}

impl SetTable {
    fn intern(&mut self, mut members: Vec<u64>) -> u64 {
        members.sort_unstable();
        members.dedup();
        if let Some(&id) = self.index.get(members.as_slice()) {
            return id;
        }
        let id = self.members.len() as u64;
        let key = members.into_boxed_slice();
        self.index.insert(key.clone(), id);
        self.members.push(key);
        id
    }
}

impl GrundyEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Γ0(g) = mex {Γ0(g') : g → g'}.
    pub fn grundy_number(&mut self, store: &GameStore, g: GameId) -> Nat {
        if let Some(Some(v)) = self.numbers.get(g.index()) {
            return *v;
        }
        if self.numbers.len() < store.len() {
            self.numbers.resize(store.len(), None);
        }
        // Iterative post-order over the not-yet-known part of the DAG.
        let mut stack = vec![(g, false)];
        while let Some((node, expanded)) = stack.pop() {
            if self.numbers[node.index()].is_some() {
                continue;
            }
            if expanded {
                let set: GrundySet = store
                    .options(node)
                    .iter()
                    .map(|o| self.numbers[o.index()].expect("option evaluated first"))
                    .collect();
                self.numbers[node.index()] = Some(mex(&set));
            } else {
                stack.push((node, true));
                stack.extend(
                    store.options(node).iter().filter(|o| self.numbers[o.index()].is_none()).map(|&o| (o, false)),
                );
            }
        }
        self.numbers[g.index()].expect("root evaluated")
    }

    /// Γ1(g) = {Γ0(g') : g → g'}.
    pub fn grundy_set(&mut self, store: &GameStore, g: GameId) -> GrundySet {
        let options = store.options(g);
        let mut values = Vec::with_capacity(options.len());
        for &o in options {
            values.push(self.grundy_number(store, o));
        }
        values.into_iter().collect()
    }

    pub fn outcome(&mut self, store: &GameStore, g: GameId) -> Outcome {
        Outcome::of_grundy(self.grundy_number(store, g))
    }

    pub fn equivalent0(&mut self, store: &GameStore, g: GameId, h: GameId) -> bool {
        self.grundy_number(store, g) == self.grundy_number(store, h)
    }

    pub fn equivalent1(&mut self, store: &GameStore, g: GameId, h: GameId) -> bool {
        self.grundy_set(store, g) == self.grundy_set(store, h)
    }

    /// Γk(g): Γ0 for k = 0, otherwise the set of Γk−1 values of the options.
    pub fn grundy_k(&mut self, store: &GameStore, g: GameId, k: u32) -> GrundyValue {
        if k == 0 {
            let n = self.grundy_number(store, g);
            return GrundyValue { depth: 0, id: n };
        }
        let order = store.reachable_postorder(g);
        for o in &order {
            self.grundy_number(store, *o);
        }
        while self.levels.len() < k as usize {
            self.levels.push(Vec::new());
            self.sets.push(SetTable::default());
        }
        for depth in 1..=k as usize {
            if self.levels[depth - 1].len() < store.len() {
                self.levels[depth - 1].resize(store.len(), None);
            }
            for &node in &order {
                if self.levels[depth - 1][node.index()].is_some() {
                    continue;
                }
                let members: Vec<u64> = store.options(node).iter().map(|o| self.value_id(*o, depth - 1)).collect();
                let id = self.sets[depth - 1].intern(members);
                self.levels[depth - 1][node.index()] = Some(id);
            }
        }
        GrundyValue { depth: k, id: self.value_id(g, k as usize) }
    }

    fn value_id(&self, g: GameId, depth: usize) -> u64 {
        if depth == 0 {
            self.numbers[g.index()].expect("Γ0 computed")
        } else {
            self.levels[depth - 1][g.index()].expect("lower level computed")
        }
    }

    /// Members of a depth ≥ 1 value.
    pub fn members(&self, v: GrundyValue) -> Vec<GrundyValue> {
        if v.depth == 0 {
            return Vec::new();
        }
        self.sets[v.depth as usize - 1].members[v.id as usize]
            .iter()
            .map(|&id| GrundyValue { depth: v.depth - 1, id })
            .collect()
    }

    /// Recovers Γ0 from a value of any depth by taking nested mexes.
    pub fn project_to_number(&self, v: GrundyValue) -> Nat {
        if v.depth == 0 {
            return v.id;
        }
        let inner: GrundySet = self.members(v).into_iter().map(|m| self.project_to_number(m)).collect();
        mex(&inner)
    }

    /// Recovers Γ1 from a value of depth ≥ 1.
    pub fn project_to_set(&self, v: GrundyValue) -> Option<GrundySet> {
        (v.depth >= 1).then(|| self.members(v).into_iter().map(|m| self.project_to_number(m)).collect())
    }

    pub fn to_nested(&self, v: GrundyValue) -> NestedValue {
        if v.depth == 0 {
            NestedValue::Number(v.id)
        } else {
            let mut items: Vec<NestedValue> = self.members(v).into_iter().map(|m| self.to_nested(m)).collect();
            items.sort();
            NestedValue::Set(items)
        }
    }

    /// Finds `(λ, ρ)` with `λ, ρ ≤ bound` such that `⟨λ⟩ + (g : ⟨ρ⟩)` and
    /// `⟨λ⟩ + (h : ⟨ρ⟩)` lie in different outcome classes.
    ///
    /// Uses Γ0(⟨λ⟩ + (g:⟨ρ⟩)) = λ ⊕ ex_ρ Γ1(g) instead of building the games;
    /// [`context_game`] builds them for cross-checking. Pairs are scanned in
    /// increasing order of `λ + ρ`.
    pub fn distinguish_by_context(
        &mut self,
        store: &GameStore,
        g: GameId,
        h: GameId,
        bound: Nat,
    ) -> Option<(Nat, Nat)> {
        let a = self.grundy_set(store, g);
        let b = self.grundy_set(store, h);
        if a == b {
            return None;
        }
        for total in 0..=bound.saturating_mul(2) {
            let lo = total.saturating_sub(bound);
            for rho in lo..=total.min(bound) {
                let lambda = total - rho;
                let og = Outcome::of_grundy(nim_add(lambda, ex(rho, &a)));
                let oh = Outcome::of_grundy(nim_add(lambda, ex(rho, &b)));
                if og != oh {
                    return Some((lambda, rho));
                }
            }
        }
        None
    }
}

/// The distinguishing context game ⟨λ⟩ + (g : ⟨ρ⟩).
pub fn context_game(store: &mut GameStore, g: GameId, lambda: usize, rho: usize) -> GameId {
    let heap_l = store.nim_heap(lambda);
    let heap_r = store.nim_heap(rho);
    let tail = store.osum(g, heap_r);
    store.dsum(heap_l, tail)
}

/// Grundy number by plain recursive expansion with a private memo.
///
/// Shares nothing with [`GrundyEngine`] apart from `mex`, so it serves as the
/// reference value in tests and acceptance checks.
pub fn oracle_grundy(store: &GameStore, g: GameId) -> Nat {
    fn go(store: &GameStore, g: GameId, memo: &mut HashMap<GameId, Nat>) -> Nat {
        if let Some(&v) = memo.get(&g) {
            return v;
        }
        let mut seen = Vec::new();
        for &o in store.options(g) {
            seen.push(go(store, o, memo));
        }
        let v = mex(&GrundySet::from(seen));
        memo.insert(g, v);
        v
    }
    go(store, g, &mut HashMap::new())
}
