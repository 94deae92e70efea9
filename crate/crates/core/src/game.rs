//! Hash-consed storage of short impartial games.
//!
//! A game is identified by its set of options. Every option is interned
//! before the games that reach it, so ids increase along the reverse of the
//! option relation and the store is acyclic by construction.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Handle to a game inside a [`GameStore`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GameId(u32);

impl GameId {
    /// The empty game ⟨0⟩, always present at index zero.
    pub const ZERO: GameId = GameId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("unknown game id {0:?}")]
    UnknownId(GameId),
    #[error("game store is full")]
    Full,
}

#[derive(Debug, Clone)]
pub struct GameStore {
    nodes: Vec<Box<[GameId]>>,
    index: HashMap<Box<[GameId]>, GameId>,
    heaps: Vec<GameId>,
    dsum_memo: HashMap<(GameId, GameId), GameId>,
    osum_memo: HashMap<(GameId, GameId), GameId>,
}

impl Default for GameStore {
    fn default() -> Self {
        Self::new()
    }
}

impl GameStore {
    pub fn new() -> Self {
        let empty: Box<[GameId]> = Box::new([]);
        let mut index = HashMap::new();
        index.insert(empty.clone(), GameId::ZERO);
        GameStore {
            nodes: vec![empty],
            index,
            heaps: vec![GameId::ZERO],
            dsum_memo: HashMap::new(),
            osum_memo: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, g: GameId) -> bool {
        g.index() < self.nodes.len()
    }

    /// Options of `g`, sorted ascending by id.
    ///
    /// Panics if `g` does not belong to this store.
    pub fn options(&self, g: GameId) -> &[GameId] {
        &self.nodes[g.index()]
    }

    pub fn get_options(&self, g: GameId) -> Option<&[GameId]> {
        self.nodes.get(g.index()).map(|o| &**o)
    }

    pub fn ids(&self) -> impl Iterator<Item = GameId> {
        (0..self.nodes.len() as u32).map(GameId)
    }

    /// Interns the game whose options are exactly `options` (duplicates are dropped).
    pub fn intern(&mut self, options: &[GameId]) -> Result<GameId, GameError> {
        if let Some(&bad) = options.iter().find(|g| !self.contains(**g)) {
            return Err(GameError::UnknownId(bad));
        }
        let mut key = options.to_vec();
        key.sort_unstable();
        key.dedup();
        self.intern_sorted(key)
    }

    fn intern_sorted(&mut self, key: Vec<GameId>) -> Result<GameId, GameError> {
        if let Some(&id) = self.index.get(key.as_slice()) {
            return Ok(id);
        }
        let raw = u32::try_from(self.nodes.len()).map_err(|_| GameError::Full)?;
        let id = GameId(raw);
        let key = key.into_boxed_slice();
        self.index.insert(key.clone(), id);
        self.nodes.push(key);
        Ok(id)
    }

    /// Interns options known to belong to this store.
    pub(crate) fn intern_known(&mut self, mut options: Vec<GameId>) -> GameId {
        options.sort_unstable();
        options.dedup();
        self.intern_sorted(options).expect("game store overflow")
    }

    /// The nim heap ⟨n⟩ with options ⟨0⟩, …, ⟨n−1⟩.
    pub fn nim_heap(&mut self, n: usize) -> GameId {
        while self.heaps.len() <= n {
            let next = self.heaps.clone();
            let id = self.intern_known(next);
            self.heaps.push(id);
        }
        self.heaps[n]
    }

    /// Disjunctive sum `g + h`: options `g' + h` and `g + h'`.
    pub fn dsum(&mut self, g: GameId, h: GameId) -> GameId {
        self.build_pairwise(g, h, Compound::Disjunctive)
    }

    /// Ordinal sum `g : h`: options `g : h'` and `g'` (that is, `g' : ⟨0⟩`).
    pub fn osum(&mut self, g: GameId, h: GameId) -> GameId {
        self.build_pairwise(g, h, Compound::Ordinal)
    }

    fn memo(&self, kind: Compound, key: (GameId, GameId)) -> Option<GameId> {
        match kind {
            Compound::Disjunctive => self.dsum_memo.get(&key).copied(),
            Compound::Ordinal => self.osum_memo.get(&key).copied(),
        }
    }

    fn children(&self, kind: Compound, (g, h): (GameId, GameId)) -> Vec<Child> {
        let mut out = Vec::new();
        match kind {
            Compound::Disjunctive => {
                out.extend(self.options(g).iter().map(|&g2| Child::Pair((g2, h))));
                out.extend(self.options(h).iter().map(|&h2| Child::Pair((g, h2))));
            }
            Compound::Ordinal => {
                out.extend(self.options(h).iter().map(|&h2| Child::Pair((g, h2))));
                out.extend(self.options(g).iter().map(|&g2| Child::Done(g2)));
            }
        }
        out
    }

    // Explicit post-order traversal; sums of deep games must not recurse.
    fn build_pairwise(&mut self, g: GameId, h: GameId, kind: Compound) -> GameId {
        assert!(self.contains(g) && self.contains(h), "game ids from a different store");
        if let Some(id) = self.trivial(kind, g, h).or_else(|| self.memo(kind, (g, h))) {
            return id;
        }
        let mut stack = vec![((g, h), false)];
        while let Some((key, expanded)) = stack.pop() {
            if self.memo(kind, key).is_some() {
                continue;
            }
            let children = self.children(kind, key);
            let lookup = |s: &Self, c: &Child| match *c {
                Child::Done(id) => Some(id),
                Child::Pair((a, b)) => s.trivial(kind, a, b).or_else(|| s.memo(kind, (a, b))),
            };
            if expanded {
                let options: Vec<GameId> =
                    children.iter().map(|c| lookup(self, c).expect("children resolved before parent")).collect();
                let id = self.intern_known(options);
                match kind {
                    Compound::Disjunctive => self.dsum_memo.insert(key, id),
                    Compound::Ordinal => self.osum_memo.insert(key, id),
                };
            } else {
                stack.push((key, true));
                for c in &children {
                    if let (Child::Pair(pair), None) = (c, lookup(self, c)) {
                        stack.push((*pair, false));
                    }
                }
            }
        }
        self.memo(kind, (g, h)).expect("root resolved")
    }

    fn trivial(&self, kind: Compound, g: GameId, h: GameId) -> Option<GameId> {
        match kind {
            Compound::Disjunctive if g == GameId::ZERO => Some(h),
            Compound::Disjunctive if h == GameId::ZERO => Some(g),
            Compound::Ordinal if h == GameId::ZERO => Some(g),
            _ => None,
        }
    }

    /// All games reachable from `root` (including itself), in an order where
    /// every game follows its options.
    pub fn reachable_postorder(&self, root: GameId) -> Vec<GameId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![(root, 0usize)];
        seen[root.index()] = true;
        while let Some((g, next)) = stack.pop() {
            let opts = self.options(g);
            if let Some(&child) = opts.get(next) {
                stack.push((g, next + 1));
                if !seen[child.index()] {
                    seen[child.index()] = true;
                    stack.push((child, 0));
                }
            } else {
                order.push(g);
            }
        }
        order
    }

    /// Number of distinct games reachable from `g`, including `g`.
    pub fn subgame_count(&self, g: GameId) -> usize {
        self.reachable_postorder(g).len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Compound {
    Disjunctive,
    Ordinal,
}

enum Child {
    Pair((GameId, GameId)),
    Done(GameId),
}
