//! Ordered joins of short impartial games.
//!
//! An ordered join places one component game on each element of a finite
//! poset. A move is made in one component and clears every component
//! strictly above it. Disjunctive sums (antichain shapes), ordinal sums
//! (chain shapes) and poset games (every component ⟨1⟩) are special cases.
//!
//! The Grundy set of a join is determined by its shape and the Grundy sets of
//! its components, and [`eval::evaluate`] computes it along the modular
//! decomposition of the shape. Series-parallel shapes never need expansion.
//!
//! ```
//! use ordjoin::{GameStore, GrundyEngine, JoinPosition, Poset};
//!
//! let mut store = GameStore::new();
//! let mut engine = GrundyEngine::new();
//! let n = JoinPosition::poset_game(Poset::zigzag_n(), &mut store);
//! let g = n.to_game(&mut store, ordjoin::join::DEFAULT_BUDGET).unwrap();
//! assert_eq!(engine.grundy_number(&store, g), 0);
//! ```

pub mod eval;
pub mod format;
pub mod game;
pub mod grundy;
pub mod join;
pub mod ordinal;
pub mod poset;

pub use eval::{evaluate, grundy_of_join, EvalError, ShapeEvaluation};
pub use game::{GameError, GameId, GameStore};
pub use grundy::{oracle_grundy, GrundyEngine, GrundyValue, NestedValue, Outcome};
pub use join::{JoinError, JoinPosition};
pub use ordinal::{ex, mex, nim_add, GrundySet, Nat};
pub use poset::{modular_decompose, Involution, MdTree, Poset, PosetError};
