//! Modular decomposition of finite posets.
//!
//! A set `M` of elements is a module if every element outside `M` is above
//! all of `M`, below all of `M`, or incomparable to all of `M`. The tree
//! produced here has maximal antichain and chain quotients; the remaining
//! internal nodes carry an indecomposable quotient.
//!
//! Antichain and chain nodes come from connected components of the
//! comparability and incomparability graphs. Indecomposable nodes split
//! their elements by computing, for a representative `v`, the smallest
//! module containing `{v, w}` for every `w`. This is polynomial but not
//! linear; it is fast on the series-parallel parts and adequate for prime
//! quotients of moderate size.

use super::{modular_compose_with, Bits, Poset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MdTree {
    /// A single element, by index in the decomposed poset.
    Leaf(usize),
    /// Pairwise incomparable children; at least two, none of them an antichain node.
    Antichain(Vec<MdTree>),
    /// Children ordered bottom to top; at least two, none of them a chain node.
    Chain(Vec<MdTree>),
    /// Children aligned with the elements of an indecomposable quotient
    /// (labelled `"1"`, `"2"`, …).
    Indecomposable { quotient: Poset, children: Vec<MdTree> },
}

impl MdTree {
    pub fn children(&self) -> &[MdTree] {
        match self {
            MdTree::Leaf(_) => &[],
            MdTree::Antichain(c) | MdTree::Chain(c) => c,
            MdTree::Indecomposable { children, .. } => children,
        }
    }

    /// Leaf element indices, left to right.
    pub fn elements(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                MdTree::Leaf(i) => out.push(*i),
                _ => stack.extend(t.children().iter().rev()),
            }
        }
        out
    }

    pub fn is_series_parallel(&self) -> bool {
        self.count_indecomposable() == 0
    }

    pub fn count_indecomposable(&self) -> usize {
        let own = usize::from(matches!(self, MdTree::Indecomposable { .. }));
        own + self.children().iter().map(MdTree::count_indecomposable).sum::<usize>()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(MdTree::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(MdTree::depth).max().unwrap_or(0)
    }

    /// The quotient poset of an internal node.
    pub fn quotient(&self) -> Option<Poset> {
        match self {
            MdTree::Leaf(_) => None,
            MdTree::Antichain(c) => Some(Poset::antichain(c.len())),
            MdTree::Chain(c) => Some(Poset::chain(c.len())),
            MdTree::Indecomposable { quotient, .. } => Some(quotient.clone()),
        }
    }

    /// Rebuilds the poset by modular composition, labelling leaves with
    /// `labels[element]`.
    pub fn recompose(&self, labels: &[String]) -> Poset {
        match self {
            MdTree::Leaf(i) => Poset::from_relations(&[labels[*i].as_str()], &[]).expect("singleton"),
            _ => {
                let quotient = self.quotient().expect("internal node");
                let parts: Vec<Poset> = self.children().iter().map(|c| c.recompose(labels)).collect();
                modular_compose_with(&quotient, &parts, |ri, ci| parts[ri].label(ci).to_owned())
                    .expect("children are nonempty with distinct labels")
            }
        }
    }

    /// Renders the tree with one node per line.
    pub fn render(&self, labels: &[String]) -> String {
        let mut out = String::new();
        self.render_into(labels, 0, &mut out);
        out
    }

    fn render_into(&self, labels: &[String], indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            MdTree::Leaf(i) => out.push_str(&format!("{pad}{}\n", labels[*i])),
            MdTree::Antichain(_) => out.push_str(&format!("{pad}antichain\n")),
            MdTree::Chain(_) => out.push_str(&format!("{pad}chain (bottom to top)\n")),
            MdTree::Indecomposable { quotient, .. } => {
                let covers: Vec<String> = quotient
                    .cover_pairs()
                    .into_iter()
                    .map(|(a, b)| format!("{}<{}", quotient.label(a), quotient.label(b)))
                    .collect();
                out.push_str(&format!("{pad}indecomposable [{}]\n", covers.join(" ")));
            }
        }
        for c in self.children() {
            c.render_into(labels, indent + 1, out);
        }
    }
}

/// Modular decomposition tree of a nonempty poset.
pub fn modular_decompose(s: &Poset) -> MdTree {
    assert!(!s.is_empty(), "cannot decompose the empty poset");
    let n = s.len();
    let mut comparable = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = s.above(i).clone();
        row.union_with(s.below(i));
        comparable.push(row);
    }
    let ctx = Ctx { s, comparable };
    // Explicit work stack: deep alternating antichain/chain trees are common.
    enum Task {
        Split(Bits),
        Build(Kind, usize),
    }
    enum Kind {
        Antichain,
        Chain,
        Indecomposable(Poset),
    }
    let mut tasks = vec![Task::Split(Bits::full(n))];
    let mut done: Vec<MdTree> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::Split(set) => {
                if set.count() == 1 {
                    done.push(MdTree::Leaf(set.first().expect("one element")));
                    continue;
                }
                let (kind, parts) = ctx.split(&set);
                tasks.push(Task::Build(kind, parts.len()));
                // Pushed in reverse so results land in `done` in part order.
                tasks.extend(parts.into_iter().rev().map(Task::Split));
            }
            Task::Build(kind, k) => {
                let children = done.split_off(done.len() - k);
                done.push(match kind {
                    Kind::Antichain => MdTree::Antichain(children),
                    Kind::Chain => MdTree::Chain(children),
                    Kind::Indecomposable(quotient) => MdTree::Indecomposable { quotient, children },
                });
            }
        }
    }

    struct Ctx<'a> {
        s: &'a Poset,
        comparable: Vec<Bits>,
    }

    impl Ctx<'_> {
        fn split(&self, set: &Bits) -> (Kind, Vec<Bits>) {
            let comps = self.components(set, false);
            if comps.len() > 1 {
                return (Kind::Antichain, comps);
            }
            let mut cocomps = self.components(set, true);
            if cocomps.len() > 1 {
                let rep = |b: &Bits| b.first().expect("nonempty");
                cocomps.sort_by(|a, b| {
                    if self.s.lt(rep(a), rep(b)) {
                        std::cmp::Ordering::Less
                    } else {
                        std::cmp::Ordering::Greater
                    }
                });
                return (Kind::Chain, cocomps);
            }
            let parts = self.maximal_modules(set);
            let reps: Vec<usize> = parts.iter().map(|p| p.first().expect("nonempty")).collect();
            let quotient = self.s.induced(&reps);
            let labels = (1..=reps.len()).map(|k| k.to_string()).collect();
            let quotient = quotient.relabel(labels).expect("distinct labels");
            debug_assert!(quotient.len() >= 4);
            (Kind::Indecomposable(quotient), parts)
        }

        // Connected components of the comparability graph (or its complement) on `set`.
        fn components(&self, set: &Bits, complement: bool) -> Vec<Bits> {
            let mut unvisited = set.clone();
            let mut out = Vec::new();
            while let Some(start) = unvisited.first() {
                unvisited.clear(start);
                let mut comp = Bits::from_indices(self.s.len(), [start]);
                let mut frontier = vec![start];
                while let Some(v) = frontier.pop() {
                    let mut next = unvisited.clone();
                    if complement {
                        next.difference_with(&self.comparable[v]);
                    } else {
                        next.intersect_with(&self.comparable[v]);
                    }
                    for w in next.ones() {
                        unvisited.clear(w);
                        comp.set(w);
                        frontier.push(w);
                    }
                }
                out.push(comp);
            }
            out
        }

        // `z` splits `m` unless it is above all, below all, or incomparable to all of `m`.
        fn splits(&self, z: usize, m: &Bits) -> bool {
            !(m.is_subset(self.s.above(z)) || m.is_subset(self.s.below(z)) || !m.intersects(&self.comparable[z]))
        }

        fn smallest_module(&self, set: &Bits, seed: [usize; 2]) -> Bits {
            let mut m = Bits::from_indices(self.s.len(), seed);
            loop {
                let mut outside = set.clone();
                outside.difference_with(&m);
                let splitters: Vec<usize> = outside.ones().filter(|&z| self.splits(z, &m)).collect();
                if splitters.is_empty() {
                    return m;
                }
                for z in splitters {
                    m.set(z);
                }
                if m == *set {
                    return m;
                }
            }
        }

        // With both graphs connected, the maximal proper modules partition `set`;
        // v and w share one exactly when the smallest module holding both is proper.
        fn maximal_modules(&self, set: &Bits) -> Vec<Bits> {
            let mut left = set.clone();
            let mut parts = Vec::new();
            while let Some(v) = left.first() {
                let mut part = Bits::from_indices(self.s.len(), [v]);
                for w in left.ones().filter(|&w| w != v) {
                    if self.smallest_module(set, [v, w]) != *set {
                        part.set(w);
                    }
                }
                left.difference_with(&part);
                parts.push(part);
            }
            parts
        }
    }

    let tree = done.pop().expect("root");
    debug_assert!(done.is_empty());
    tree
}
