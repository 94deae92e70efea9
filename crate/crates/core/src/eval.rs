//! Evaluation of ordered joins from the Grundy sets of their components.
//!
//! Γ1 of a join depends only on its shape and the Γ1 of its components, so
//! each component may be replaced by the smallest game with the same Grundy
//! set (see [`canonical_game`]). [`evaluate`] walks the modular decomposition
//! of the shape: antichain and chain nodes combine child sets with
//! [`dsum_grundy_set`] and [`osum_grundy_set`], indecomposable nodes expand
//! the quotient join over canonical components.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameId, GameStore};
use crate::grundy::GrundyEngine;
use crate::join::{JoinError, JoinPosition};
use crate::ordinal::{ex, mex, nim_add, GrundySet, Nat};
use crate::poset::{is_weakly_order_preserving, modular_decompose, Bits, Involution, MdTree, Poset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("cannot evaluate the empty shape")]
    EmptyShape,
    #[error("shape has {expected} elements but {got} leaf sets were given")]
    LeafCount { expected: usize, got: usize },
    #[error("indecomposable quotient of size {quotient_size}: {source}")]
    Budget {
        quotient_size: usize,
        #[source]
        source: JoinError,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("involution acts on {got} elements but the shape has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("involution is not weakly order-preserving on the shape")]
    NotWeaklyOrderPreserving,
    #[error("components at {element:?} and {image:?} have different Grundy sets")]
    ComponentMismatch { element: String, image: String },
    #[error("fixed points do not form a lower set: {above:?} is fixed but {below:?} below it is not")]
    FixedPointsNotLowerSet { above: String, below: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown element {0:?}")]
pub struct UnknownElement(pub String);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalStats {
    /// Antichain and chain nodes combined in closed form.
    pub fast_path_nodes: usize,
    /// Indecomposable nodes evaluated by expansion.
    pub fallback_nodes: usize,
    /// Largest indecomposable quotient expanded.
    pub max_quotient_size: usize,
    /// Join positions interned while expanding quotients.
    pub positions_expanded: usize,
}

#[derive(Clone, Debug)]
pub struct ShapeEvaluation {
    pub shape: Poset,
    pub decomposition: MdTree,
    pub leaf_inputs: Vec<GrundySet>,
    pub result: GrundySet,
    pub stats: EvalStats,
}

/// The game whose options are exactly the nim heaps ⟨λ⟩ for λ in `gs`.
pub fn canonical_game(store: &mut GameStore, gs: &GrundySet) -> GameId {
    let heaps: Vec<GameId> = gs.iter().map(|v| store.nim_heap(v as usize)).collect();
    store.intern_known(heaps)
}

pub fn replace_component(p: &JoinPosition, label: &str, h: GameId) -> Result<JoinPosition, UnknownElement> {
    let i = p.shape().index_of(label).ok_or_else(|| UnknownElement(label.to_owned()))?;
    Ok(p.with_component(i, h))
}

/// Γ1(g + h) from Γ1(g) and Γ1(h).
pub fn dsum_grundy_set(a: &GrundySet, b: &GrundySet) -> GrundySet {
    let (ma, mb) = (mex(a), mex(b));
    a.iter().map(|x| nim_add(x, mb)).chain(b.iter().map(|y| nim_add(ma, y))).collect()
}

/// Γ1(g : h) from Γ1(g) and Γ1(h).
pub fn osum_grundy_set(a: &GrundySet, b: &GrundySet) -> GrundySet {
    let mut out: Vec<Nat> = a.iter().collect();
    out.extend(b.iter().map(|mu| ex(mu, a)));
    out.into_iter().collect()
}

/// Elements of the largest upper set on which every component has Γ0 = 0.
pub fn zero_upper_set(p: &JoinPosition, store: &GameStore, engine: &mut GrundyEngine) -> Vec<usize> {
    let zero: Vec<bool> = p.components().iter().map(|&g| engine.grundy_number(store, g) == 0).collect();
    p.shape().max_upper_set_within(|i| zero[i])
}

/// Drops the largest upper set of components with Γ0 = 0; Γ0 of the join is unchanged.
pub fn reduce_zero_upper(p: &JoinPosition, store: &GameStore, engine: &mut GrundyEngine) -> JoinPosition {
    let z = zero_upper_set(p, store, engine);
    if z.is_empty() {
        return p.clone();
    }
    let drop = Bits::from_indices(p.shape().len(), z);
    let keep: Vec<usize> = (0..p.shape().len()).filter(|&i| !drop.get(i)).collect();
    let reduced = p.restrict(&keep);
    debug_assert!(zero_upper_set(&reduced, store, engine).is_empty());
    reduced
}

/// Checks the three conditions under which the join may be restricted to
/// the fixed points of `sigma`.
pub fn check_symmetry(
    p: &JoinPosition,
    sigma: &Involution,
    store: &GameStore,
    engine: &mut GrundyEngine,
) -> Result<(), SymmetryError> {
    let shape = p.shape();
    if sigma.len() != shape.len() {
        return Err(SymmetryError::SizeMismatch { expected: shape.len(), got: sigma.len() });
    }
    if !is_weakly_order_preserving(shape, sigma).expect("sizes checked") {
        return Err(SymmetryError::NotWeaklyOrderPreserving);
    }
    for (i, j) in sigma.swaps() {
        if engine.grundy_set(store, p.component(i)) != engine.grundy_set(store, p.component(j)) {
            return Err(SymmetryError::ComponentMismatch {
                element: shape.label(i).to_owned(),
                image: shape.label(j).to_owned(),
            });
        }
    }
    for f in sigma.fixed_points() {
        if let Some(b) = shape.below(f).ones().find(|&b| sigma.apply(b) != b) {
            return Err(SymmetryError::FixedPointsNotLowerSet {
                above: shape.label(f).to_owned(),
                below: shape.label(b).to_owned(),
            });
        }
    }
    Ok(())
}

/// Restricts the join to the fixed points of `sigma`, preserving Γ0. A
/// fixed-point-free `sigma` yields the empty join, certifying Γ0 = 0.
pub fn reduce_symmetry(
    p: &JoinPosition,
    sigma: &Involution,
    store: &GameStore,
    engine: &mut GrundyEngine,
) -> Result<JoinPosition, SymmetryError> {
    check_symmetry(p, sigma, store, engine)?;
    Ok(p.restrict(&sigma.fixed_points()))
}

/// Γ1 of `shape ⨝ canonical_game(leaf_sets[i])`, by modular decomposition.
pub fn evaluate(
    shape: &Poset,
    leaf_sets: &[GrundySet],
    store: &mut GameStore,
    engine: &mut GrundyEngine,
    budget: usize,
) -> Result<ShapeEvaluation, EvalError> {
    if shape.is_empty() {
        return Err(EvalError::EmptyShape);
    }
    if leaf_sets.len() != shape.len() {
        return Err(EvalError::LeafCount { expected: shape.len(), got: leaf_sets.len() });
    }
    let tree = modular_decompose(shape);
    let mut stats = EvalStats::default();
    let result = evaluate_tree(&tree, leaf_sets, store, engine, budget, &mut stats)?;
    Ok(ShapeEvaluation { shape: shape.clone(), decomposition: tree, leaf_inputs: leaf_sets.to_vec(), result, stats })
}

fn evaluate_tree(
    root: &MdTree,
    leaf_sets: &[GrundySet],
    store: &mut GameStore,
    engine: &mut GrundyEngine,
    budget: usize,
    stats: &mut EvalStats,
) -> Result<GrundySet, EvalError> {
    let mut stack = vec![(root, false)];
    let mut values: Vec<GrundySet> = Vec::new();
    while let Some((node, visited)) = stack.pop() {
        if let MdTree::Leaf(i) = node {
            values.push(leaf_sets[*i].clone());
            continue;
        }
        let children = node.children();
        if !visited {
            stack.push((node, true));
            stack.extend(children.iter().rev().map(|c| (c, false)));
            continue;
        }
        let parts = values.split_off(values.len() - children.len());
        let combined = match node {
            MdTree::Antichain(_) => {
                stats.fast_path_nodes += 1;
                parts.iter().skip(1).fold(parts[0].clone(), |acc, s| dsum_grundy_set(&acc, s))
            }
            MdTree::Chain(_) => {
                stats.fast_path_nodes += 1;
                parts.iter().skip(1).fold(parts[0].clone(), |acc, s| osum_grundy_set(&acc, s))
            }
            MdTree::Indecomposable { quotient, .. } => {
                stats.fallback_nodes += 1;
                stats.max_quotient_size = stats.max_quotient_size.max(quotient.len());
                let comps: Vec<GameId> = parts.iter().map(|s| canonical_game(store, s)).collect();
                let join = JoinPosition::new(quotient.clone(), comps).expect("aligned children");
                let before = store.len();
                let g = join
                    .to_game(store, budget)
                    .map_err(|source| EvalError::Budget { quotient_size: quotient.len(), source })?;
                stats.positions_expanded += store.len() - before;
                engine.grundy_set(store, g)
            }
            MdTree::Leaf(_) => unreachable!(),
        };
        values.push(combined);
    }
    Ok(values.pop().expect("root value"))
}

/// Γ0 of a join: zero-upper-set reduction, then [`evaluate`] on the
/// components' Grundy sets.
pub fn grundy_of_join(
    p: &JoinPosition,
    store: &mut GameStore,
    engine: &mut GrundyEngine,
    budget: usize,
) -> Result<Nat, EvalError> {
    let reduced = reduce_zero_upper(p, store, engine);
    if reduced.shape().is_empty() {
        return Ok(0);
    }
    let sets: Vec<GrundySet> = reduced.components().iter().map(|&g| engine.grundy_set(store, g)).collect();
    let eval = evaluate(reduced.shape(), &sets, store, engine, budget)?;
    Ok(mex(&eval.result))
}

/// Γ1 of a join through [`evaluate`], without reductions.
pub fn grundy_set_of_join(
    p: &JoinPosition,
    store: &mut GameStore,
    engine: &mut GrundyEngine,
    budget: usize,
) -> Result<GrundySet, EvalError> {
    if p.shape().is_empty() {
        return Ok(GrundySet::new());
    }
    let sets: Vec<GrundySet> = p.components().iter().map(|&g| engine.grundy_set(store, g)).collect();
    Ok(evaluate(p.shape(), &sets, store, engine, budget)?.result)
}
