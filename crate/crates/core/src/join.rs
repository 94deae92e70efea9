//! Ordered joins: a fixed poset shape with one component game per element.
//!
//! A move picks an element `i`, moves in its component, and replaces every
//! component strictly above `i` by the empty game.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::game::{GameId, GameStore};
use crate::poset::{modular_compose, Poset, PosetError};

/// Default cap on distinct positions interned by [`JoinPosition::to_game`].
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JoinError {
    #[error("expansion exceeds the position budget of {budget} (at least {at_least} positions)")]
    Budget { budget: usize, at_least: u128 },
    #[error("shape has {expected} elements but {got} components were given")]
    ComponentCount { expected: usize, got: usize },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinPosition {
    shape: Arc<Poset>,
    components: Vec<GameId>,
}

impl JoinPosition {
    pub fn new(shape: impl Into<Arc<Poset>>, components: Vec<GameId>) -> Result<Self, JoinError> {
        let shape = shape.into();
        if components.len() != shape.len() {
            return Err(JoinError::ComponentCount { expected: shape.len(), got: components.len() });
        }
        Ok(JoinPosition { shape, components })
    }

    /// Every component set to the empty game.
    pub fn empty(shape: impl Into<Arc<Poset>>) -> Self {
        let shape = shape.into();
        let components = vec![GameId::ZERO; shape.len()];
        JoinPosition { shape, components }
    }

    /// The poset game on `shape`: every component is ⟨1⟩.
    pub fn poset_game(shape: impl Into<Arc<Poset>>, store: &mut GameStore) -> Self {
        let shape = shape.into();
        let one = store.nim_heap(1);
        let components = vec![one; shape.len()];
        JoinPosition { shape, components }
    }

    pub fn shape(&self) -> &Poset {
        &self.shape
    }

    pub fn shared_shape(&self) -> &Arc<Poset> {
        &self.shape
    }

    pub fn components(&self) -> &[GameId] {
        &self.components
    }

    pub fn component(&self, i: usize) -> GameId {
        self.components[i]
    }

    pub fn component_by_label(&self, label: &str) -> Option<GameId> {
        self.shape.index_of(label).map(|i| self.components[i])
    }

    pub fn with_component(&self, i: usize, g: GameId) -> JoinPosition {
        let mut components = self.components.clone();
        components[i] = g;
        JoinPosition { shape: Arc::clone(&self.shape), components }
    }

    /// Elements whose component is not the empty game.
    pub fn support(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| self.components[i] != GameId::ZERO).collect()
    }

    /// The join on the induced subshape, keeping components.
    pub fn restrict(&self, elements: &[usize]) -> JoinPosition {
        JoinPosition {
            shape: Arc::new(self.shape.induced(elements)),
            components: elements.iter().map(|&i| self.components[i]).collect(),
        }
    }

    pub fn restrict_to_support(&self) -> JoinPosition {
        self.restrict(&self.support())
    }

    /// Options of this position. The shape never changes.
    pub fn moves(&self, store: &GameStore) -> Vec<JoinPosition> {
        let mut out = Vec::new();
        for_each_move(&self.shape, &self.components, store, |next| {
            out.push(JoinPosition { shape: Arc::clone(&self.shape), components: next.to_vec() });
        });
        out
    }

    /// Interns the whole game reachable from this position.
    ///
    /// Positions are memoized on their component vector. Fails without doing
    /// any work when a cheap lower bound on the number of reachable positions
    /// already exceeds `budget`; otherwise fails once `budget` distinct
    /// positions have been interned.
    pub fn to_game(&self, store: &mut GameStore, budget: usize) -> Result<GameId, JoinError> {
        let bound = self.reachable_lower_bound(store);
        if bound > budget as u128 {
            return Err(JoinError::Budget { budget, at_least: bound });
        }
        expand(&self.shape, &self.components, store, budget)
    }

    /// Lower bound on the number of distinct reachable positions: components
    /// on the maximal elements of the support move independently, so every
    /// combination of their subgames is reachable.
    pub fn reachable_lower_bound(&self, store: &GameStore) -> u128 {
        let support = self.support();
        let mut bound: u128 = 1;
        for &i in &support {
            let top = !self.shape.above(i).ones().any(|j| self.components[j] != GameId::ZERO);
            if top {
                bound = bound.saturating_mul(store.subgame_count(self.components[i]) as u128);
            }
        }
        bound
    }
}

fn for_each_move(shape: &Poset, comps: &[GameId], store: &GameStore, mut f: impl FnMut(&[GameId])) {
    let mut next = comps.to_vec();
    for i in 0..comps.len() {
        let opts = store.options(comps[i]);
        if opts.is_empty() {
            continue;
        }
        let above: Vec<usize> = shape.above(i).ones().collect();
        for &j in &above {
            next[j] = GameId::ZERO;
        }
        for &o in opts {
            next[i] = o;
            f(&next);
        }
        next[i] = comps[i];
        for &j in &above {
            next[j] = comps[j];
        }
    }
}

fn expand(shape: &Poset, root: &[GameId], store: &mut GameStore, budget: usize) -> Result<GameId, JoinError> {
    let mut memo: HashMap<Box<[GameId]>, GameId> = HashMap::new();
    let root: Box<[GameId]> = root.into();
    let mut stack: Vec<(Box<[GameId]>, bool)> = vec![(root.clone(), false)];
    while let Some((pos, expanded)) = stack.pop() {
        if memo.contains_key(&pos) {
            continue;
        }
        if expanded {
            let mut options = Vec::new();
            for_each_move(shape, &pos, store, |next| options.push(memo[next]));
            let id = store.intern_known(options);
            memo.insert(pos, id);
            if memo.len() > budget {
                return Err(JoinError::Budget { budget, at_least: memo.len() as u128 });
            }
        } else {
            let mut pending = Vec::new();
            for_each_move(shape, &pos, store, |next| {
                if !memo.contains_key(next) {
                    pending.push(Box::<[GameId]>::from(next));
                }
            });
            stack.push((pos, true));
            stack.extend(pending.into_iter().map(|p| (p, false)));
        }
    }
    Ok(memo[&root])
}

/// The join in shape `r ∘ (shapes of inner)` whose components are those of
/// the inner joins, concatenated in the order of `r`'s elements.
pub fn flatten(r: &Poset, inner: &[JoinPosition]) -> Result<JoinPosition, JoinError> {
    let shapes: Vec<Poset> = inner.iter().map(|p| p.shape().clone()).collect();
    let shape = modular_compose(r, &shapes)?;
    let components = inner.iter().flat_map(|p| p.components.iter().copied()).collect();
    JoinPosition::new(shape, components)
}
