//! Finite strict partial orders with string-labelled elements.
//!
//! Elements are addressed by index internally; labels exist for input and
//! output. The order is stored as transitively closed bit rows in both
//! directions.

mod bits;
mod decompose;
mod involution;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use bits::Bits;
pub use decompose::{modular_decompose, MdTree};
pub use involution::{is_weakly_order_preserving, weakly_op_involutions, Involution};

/// Default size limit for involution enumeration.
pub const INVOLUTION_LIMIT: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("relations contain a cycle through {0:?}")]
    Cycle(String),
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("involution acts on {got} elements but the poset has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("poset has {size} elements, enumeration limit is {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("element {0:?} has an empty child poset")]
    EmptyChild(String),
    #[error("expected {expected} child posets, got {got}")]
    ChildCount { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // up[i] = {j : i < j}, down[i] = {j : j < i}
    up: Vec<Bits>,
    down: Vec<Bits>,
}

impl Poset {
    /// Builds the transitive closure of `pairs` (read as `a < b`) on `elements`.
    pub fn from_relations<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Self, PosetError> {
        let mut index = HashMap::with_capacity(elements.len());
        for (k, e) in elements.iter().enumerate() {
            if index.insert(e.as_ref().to_owned(), k).is_some() {
                return Err(PosetError::DuplicateLabel(e.as_ref().to_owned()));
            }
        }
        let n = elements.len();
        let mut up = vec![Bits::new(n); n];
        for (a, b) in pairs {
            let lookup =
                |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| PosetError::UnknownLabel(s.as_ref().to_owned()));
            let (i, j) = (lookup(a)?, lookup(b)?);
            up[i].set(j);
        }
        let labels = elements.iter().map(|e| e.as_ref().to_owned()).collect();
        Self::close(labels, index, up)
    }

    /// Builds a poset from index pairs `(i, j)` meaning `i < j`; labels are
    /// `"1"`, `"2"`, … in index order.
    pub fn from_index_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let labels: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let index = labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        let mut up = vec![Bits::new(n); n];
        for &(i, j) in pairs {
            assert!(i < n && j < n, "pair ({i}, {j}) out of range");
            up[i].set(j);
        }
        Self::close(labels, index, up)
    }

    fn close(labels: Vec<String>, index: HashMap<String, usize>, mut up: Vec<Bits>) -> Result<Self, PosetError> {
        let n = labels.len();
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.get(k) {
                    row.union_with(&row_k);
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| up[i].get(i)) {
            return Err(PosetError::Cycle(labels[i].clone()));
        }
        Ok(Self::from_closed_parts(labels, index, up))
    }

    // `up` must already be a strict, transitively closed order.
    fn from_closed_parts(labels: Vec<String>, index: HashMap<String, usize>, up: Vec<Bits>) -> Self {
        let n = labels.len();
        let mut down = vec![Bits::new(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                down[j].set(i);
            }
        }
        Poset { labels, index, up, down }
    }

    /// Builds a poset from already transitively closed rows.
    pub(crate) fn from_closed_rows(labels: Vec<String>, up: Vec<Bits>) -> Self {
        let index = labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        Self::from_closed_parts(labels, index, up)
    }

    pub fn chain(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..n).map(|k| (k - 1, k)).collect();
        Self::from_index_pairs(n, &pairs).expect("chain")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_index_pairs(n, &[]).expect("antichain")
    }

    /// The four-element zigzag `1 < 2 > 3 < 4`.
    pub fn zigzag_n() -> Self {
        Self::from_index_pairs(4, &[(0, 1), (2, 1), (2, 3)]).expect("N")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.up[i].get(j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        i == j || self.lt(i, j) || self.lt(j, i)
    }

    /// Elements strictly above `i`.
    pub fn above(&self, i: usize) -> &Bits {
        &self.up[i]
    }

    /// Elements strictly below `i`.
    pub fn below(&self, i: usize) -> &Bits {
        &self.down[i]
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    pub fn is_upper_set(&self, set: &Bits) -> bool {
        set.ones().all(|i| self.up[i].is_subset(set))
    }

    pub fn is_lower_set(&self, set: &Bits) -> bool {
        set.ones().all(|i| self.down[i].is_subset(set))
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|i| (0..i).all(|j| self.comparable(i, j)))
    }

    pub fn is_antichain(&self) -> bool {
        self.up.iter().all(Bits::is_empty)
    }

    /// The largest upper set all of whose members satisfy `keep`:
    /// `{i : keep(j) for every j ≥ i}`.
    pub fn max_upper_set_within(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let kept = Bits::from_indices(self.len(), (0..self.len()).filter(|&i| keep(i)));
        (0..self.len()).filter(|&i| kept.get(i) && self.up[i].is_subset(&kept)).collect()
    }

    /// Induced subposet on `elements`, in the given order.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let n = elements.len();
        let up = elements.iter().map(|&i| Bits::from_indices(n, (0..n).filter(|&b| self.lt(i, elements[b])))).collect();
        let labels = elements.iter().map(|&i| self.labels[i].clone()).collect();
        Poset::from_closed_rows(labels, up)
    }

    /// Same order with new labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Poset, PosetError> {
        assert_eq!(labels.len(), self.len());
        let mut index = HashMap::with_capacity(labels.len());
        for (k, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), k).is_some() {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Poset { labels, index, up: self.up.clone(), down: self.down.clone() })
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing in between.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].ones() {
                if !self.up[i].intersects(&self.down[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// All strict pairs `(i, j)` with `i < j`.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| self.up[i].ones().map(move |j| (i, j))).collect()
    }

    /// Same elements and the same order, compared by label.
    pub fn same_order_by_label(&self, other: &Poset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let map: Option<Vec<usize>> = self.labels.iter().map(|l| other.index_of(l)).collect();
        let Some(map) = map else { return false };
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.lt(i, j) == other.lt(map[i], map[j])))
    }

    /// Irreflexivity, antisymmetry and transitivity of the stored order.
    pub fn check_axioms(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| !self.lt(i, i))
            && (0..n).all(|i| (0..n).all(|j| !(self.lt(i, j) && self.lt(j, i))))
            && (0..n).all(|i| self.up[i].ones().all(|j| self.up[j].is_subset(&self.up[i])))
            && (0..n).all(|i| (0..n).all(|j| self.lt(i, j) == self.down[j].get(i)))
    }

    /// True if `{a, b, c, d}` with `a < b > c < d` and no other relations exists.
    pub fn contains_induced_n(&self) -> bool {
        let n = self.len();
        for b in 0..n {
            for a in self.down[b].ones() {
                for c in self.down[b].ones() {
                    if a == c || self.comparable(a, c) {
                        continue;
                    }
                    for d in self.up[c].ones() {
                        if d != b && !self.comparable(a, d) && !self.comparable(b, d) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> =
            self.cover_pairs().into_iter().map(|(i, j)| format!("{}<{}", self.labels[i], self.labels[j])).collect();
        f.debug_struct("Poset").field("elements", &self.labels).field("covers", &covers).finish()
    }
}

/// Modular composition `r ∘ children`: each element of `r` is replaced by
/// its child poset. Labels of the result are `"{r}.{child}"`.
pub fn modular_compose(r: &Poset, children: &[Poset]) -> Result<Poset, PosetError> {
    modular_compose_with(r, children, |ri, ci| format!("{}.{}", r.label(ri), children[ri].label(ci)))
}

/// Modular composition with caller-chosen labels for `(r-element, child-element)`.
pub fn modular_compose_with(
    r: &Poset,
    children: &[Poset],
    mut label: impl FnMut(usize, usize) -> String,
) -> Result<Poset, PosetError> {
    if children.len() != r.len() {
        return Err(PosetError::ChildCount { expected: r.len(), got: children.len() });
    }
    if let Some(ri) = children.iter().position(Poset::is_empty) {
        return Err(PosetError::EmptyChild(r.label(ri).to_owned()));
    }
    let offsets: Vec<usize> = children
        .iter()
        .scan(0, |acc, c| {
            let start = *acc;
            *acc += c.len();
            Some(start)
        })
        .collect();
    let n: usize = children.iter().map(Poset::len).sum();
    let mut labels = Vec::with_capacity(n);
    let mut up = Vec::with_capacity(n);
    for (ri, child) in children.iter().enumerate() {
        // Everything inside children of elements above ri.
        let mut above_block = Bits::new(n);
        for rj in r.above(ri).ones() {
            for cj in 0..children[rj].len() {
                above_block.set(offsets[rj] + cj);
            }
        }
        for ci in 0..child.len() {
            let mut row = above_block.clone();
            for cj in child.above(ci).ones() {
                row.set(offsets[ri] + cj);
            }
            up.push(row);
            labels.push(label(ri, ci));
        }
    }
    let index = labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect::<HashMap<_, _>>();
    if index.len() != labels.len() {
        let mut seen = std::collections::HashSet::new();
        let dup = labels.iter().find(|l| !seen.insert(*l)).cloned().unwrap_or_default();
        return Err(PosetError::DuplicateLabel(dup));
    }
    // Closed: children and quotient are closed and blocks compare uniformly.
    Ok(Poset::from_closed_parts(labels, index, up))
}
