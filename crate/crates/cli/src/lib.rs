//! Analyses behind the `ordjoin` binary.
//!
//! [`run`] parses one input document, runs one command and returns an
//! [`AnalysisReport`]. The report renders as text or JSON; both carry the
//! same fields.

use std::fmt::Write as _;
use std::time::Instant;

use ordjoin::eval::{check_symmetry, grundy_set_of_join, reduce_symmetry, reduce_zero_upper, EvalStats, SymmetryError};
use ordjoin::format::{join_to_json, parse_any, FormatError, InputDoc, PosetJson};
use ordjoin::join::DEFAULT_BUDGET;
use ordjoin::poset::{weakly_op_involutions, INVOLUTION_LIMIT};
use ordjoin::{
    evaluate, grundy_of_join, mex, EvalError, GameId, GameStore, GrundyEngine, GrundySet, Involution, JoinError,
    JoinPosition, MdTree, Nat, NestedValue, Outcome, Poset, PosetError,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Default cap for `grundy-k`.
pub const DEFAULT_MAX_K: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Grundy,
    GrundySet,
    GrundyK,
    Outcome,
    Evaluate,
    Decompose,
    Reduce,
    Involutions,
    Bench,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Grundy => "grundy",
            Command::GrundySet => "grundy-set",
            Command::GrundyK => "grundy-k",
            Command::Outcome => "outcome",
            Command::Evaluate => "evaluate",
            Command::Decompose => "decompose",
            Command::Reduce => "reduce",
            Command::Involutions => "involutions",
            Command::Bench => "bench",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub budget: usize,
    pub bound: Option<Nat>,
    pub k: u32,
    pub allow_deep: bool,
    pub sigma: Option<String>,
    /// Second input for `outcome`: look for a distinguishing context.
    pub against: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options { budget: DEFAULT_BUDGET, bound: None, k: 2, allow_deep: false, sigma: None, against: None }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] FormatError),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Budget(_) => 5,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<JoinError> for CliError {
    fn from(e: JoinError) -> Self {
        match e {
            JoinError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// SHA-256 of the input bytes, hex encoded.
    pub input_digest: String,
    pub command: Command,
    pub result: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<EvalStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Grundy { value: Nat },
    GrundySet { set: GrundySet, mex: Nat },
    GrundyK { k: u32, value: NestedValue },
    Outcome { outcome: Outcome, grundy: Nat, context: Option<ContextSearch> },
    Evaluation { grundy_set: GrundySet, grundy: Nat, decomposition: TreeNode },
    Decomposition { tree: TreeNode, series_parallel: bool },
    Reduction(Reduction),
    Involutions { count: usize, involutions: Vec<Vec<(String, String)>> },
    Bench(Bench),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSearch {
    pub other_outcome: Outcome,
    pub bound: Nat,
    /// `(λ, ρ)` such that `⟨λ⟩ + (g:⟨ρ⟩)` and `⟨λ⟩ + (h:⟨ρ⟩)` differ in outcome.
    pub witness: Option<(Nat, Nat)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum TreeNode {
    Leaf { element: String },
    Antichain { children: Vec<TreeNode> },
    Chain { children: Vec<TreeNode> },
    Indecomposable { quotient: PosetJson, children: Vec<TreeNode> },
}

impl TreeNode {
    pub fn from_tree(t: &MdTree, labels: &[String]) -> TreeNode {
        let kids = |c: &[MdTree]| c.iter().map(|x| TreeNode::from_tree(x, labels)).collect();
        match t {
            MdTree::Leaf(i) => TreeNode::Leaf { element: labels[*i].clone() },
            MdTree::Antichain(c) => TreeNode::Antichain { children: kids(c) },
            MdTree::Chain(c) => TreeNode::Chain { children: kids(c) },
            MdTree::Indecomposable { quotient, children } => {
                TreeNode::Indecomposable { quotient: PosetJson::from_poset(quotient), children: kids(children) }
            }
        }
    }

    fn render(&self, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        let children = match self {
            TreeNode::Leaf { element } => {
                let _ = writeln!(out, "{pad}{element}");
                return;
            }
            TreeNode::Antichain { children } => {
                let _ = writeln!(out, "{pad}antichain");
                children
            }
            TreeNode::Chain { children } => {
                let _ = writeln!(out, "{pad}chain (bottom to top)");
                children
            }
            TreeNode::Indecomposable { quotient, children } => {
                let covers: Vec<String> = quotient.relations.iter().map(|(a, b)| format!("{a}<{b}")).collect();
                let _ = writeln!(out, "{pad}indecomposable [{}]", covers.join(" "));
                children
            }
        };
        for c in children {
            c.render(indent + 1, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub steps: Vec<ReductionStep>,
    /// The reduced join as an input document.
    pub reduced: serde_json::Value,
    /// True when the reduced join is empty, which certifies Γ0 = 0.
    pub certified_p_position: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum ReductionStep {
    ZeroUpperSet { removed: Vec<String> },
    Symmetry { swaps: Vec<(String, String)>, removed: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bench {
    pub naive: NaiveRun,
    pub decomposition: DecompositionRun,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveRun {
    pub micros: u64,
    pub positions: Option<usize>,
    pub grundy: Option<Nat>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRun {
    pub micros: u64,
    pub grundy: Nat,
    pub tree_nodes: usize,
    pub indecomposable_nodes: usize,
}

pub fn digest(input: &[u8]) -> String {
    hex::encode(Sha256::digest(input))
}

struct Session {
    store: GameStore,
    engine: GrundyEngine,
}

enum Subject {
    Game(GameId),
    Join(JoinPosition),
}

impl Session {
    fn subject(&mut self, doc: InputDoc, command: Command) -> Result<Subject, CliError> {
        match doc {
            InputDoc::Game(g) => Ok(Subject::Game(g.build(&mut self.store))),
            InputDoc::Join(j) => Ok(Subject::Join(j.build(&mut self.store))),
            InputDoc::Evaluate(_) | InputDoc::Poset(_) => {
                Err(CliError::Usage(format!("{} expects a game or join document", command.name())))
            }
        }
    }

    fn game(&mut self, s: Subject, budget: usize) -> Result<GameId, CliError> {
        match s {
            Subject::Game(g) => Ok(g),
            Subject::Join(p) => Ok(p.to_game(&mut self.store, budget)?),
        }
    }

    fn grundy(&mut self, s: &Subject, budget: usize) -> Result<Nat, CliError> {
        match s {
            Subject::Game(g) => Ok(self.engine.grundy_number(&self.store, *g)),
            Subject::Join(p) => Ok(grundy_of_join(p, &mut self.store, &mut self.engine, budget)?),
        }
    }
}

fn shape_of(doc: &InputDoc) -> Option<&Poset> {
    match doc {
        InputDoc::Join(j) => Some(&j.shape),
        InputDoc::Evaluate(e) => Some(&e.shape),
        InputDoc::Poset(p) => Some(p),
        InputDoc::Game(_) => None,
    }
}

fn labels_of(p: &Poset, elems: &[usize]) -> Vec<String> {
    elems.iter().map(|&i| p.label(i).to_owned()).collect()
}

fn swap_labels(p: &Poset, s: &Involution) -> Vec<(String, String)> {
    s.swaps().into_iter().map(|(i, j)| (p.label(i).to_owned(), p.label(j).to_owned())).collect()
}

/// Runs `command` on the document in `input`.
pub fn run(command: Command, input: &str, opts: &Options) -> Result<AnalysisReport, CliError> {
    let doc = parse_any(input)?;
    let mut session = Session { store: GameStore::new(), engine: GrundyEngine::new() };
    let mut stats = None;
    let result = match command {
        Command::Grundy => {
            let s = session.subject(doc, command)?;
            Payload::Grundy { value: session.grundy(&s, opts.budget)? }
        }
        Command::GrundySet => {
            let set = match session.subject(doc, command)? {
                Subject::Game(g) => session.engine.grundy_set(&session.store, g),
                Subject::Join(p) => grundy_set_of_join(&p, &mut session.store, &mut session.engine, opts.budget)?,
            };
            Payload::GrundySet { mex: mex(&set), set }
        }
        Command::GrundyK => {
            if opts.k > DEFAULT_MAX_K && !opts.allow_deep {
                return Err(CliError::Usage(format!(
                    "k = {} exceeds the default cap of {DEFAULT_MAX_K}; pass --allow-deep to override",
                    opts.k
                )));
            }
            let s = session.subject(doc, command)?;
            let g = session.game(s, opts.budget)?;
            let v = session.engine.grundy_k(&session.store, g, opts.k);
            Payload::GrundyK { k: opts.k, value: session.engine.to_nested(v) }
        }
        Command::Outcome => {
            let s = session.subject(doc, command)?;
            let grundy = session.grundy(&s, opts.budget)?;
            let context = match &opts.against {
                None => None,
                Some(other) => Some(search_context(&mut session, s, other, opts)?),
            };
            Payload::Outcome { outcome: Outcome::of_grundy(grundy), grundy, context }
        }
        Command::Evaluate => {
            let (shape, sets) = match doc {
                InputDoc::Evaluate(e) => (e.shape, e.leaf_sets),
                InputDoc::Join(j) => {
                    let p = j.build(&mut session.store);
                    let sets = p.components().iter().map(|&g| session.engine.grundy_set(&session.store, g)).collect();
                    (j.shape, sets)
                }
                _ => return Err(CliError::Usage("evaluate expects an evaluate or join document".into())),
            };
            let eval = evaluate(&shape, &sets, &mut session.store, &mut session.engine, opts.budget)?;
            stats = Some(eval.stats);
            Payload::Evaluation {
                grundy: mex(&eval.result),
                grundy_set: eval.result,
                decomposition: TreeNode::from_tree(&eval.decomposition, shape.labels()),
            }
        }
        Command::Decompose => {
            let shape = shape_of(&doc).ok_or_else(|| CliError::Usage("decompose expects a poset".into()))?;
            if shape.is_empty() {
                return Err(CliError::Precondition("cannot decompose the empty poset".into()));
            }
            let t = ordjoin::modular_decompose(shape);
            Payload::Decomposition {
                series_parallel: t.is_series_parallel(),
                tree: TreeNode::from_tree(&t, shape.labels()),
            }
        }
        Command::Reduce => {
            let InputDoc::Join(j) = doc else {
                return Err(CliError::Usage("reduce expects a join document".into()));
            };
            let p = j.build(&mut session.store);
            Payload::Reduction(reduce(&mut session, p, opts)?)
        }
        Command::Involutions => {
            let shape = shape_of(&doc).ok_or_else(|| CliError::Usage("involutions expects a poset".into()))?;
            let all = weakly_op_involutions(shape, INVOLUTION_LIMIT)?;
            Payload::Involutions { count: all.len(), involutions: all.iter().map(|s| swap_labels(shape, s)).collect() }
        }
        Command::Bench => {
            let InputDoc::Join(j) = doc else {
                return Err(CliError::Usage("bench expects a join document".into()));
            };
            let p = j.build(&mut session.store);
            let (b, s) = bench(&mut session, &p, opts)?;
            stats = Some(s);
            Payload::Bench(b)
        }
    };
    Ok(AnalysisReport { input_digest: digest(input.as_bytes()), command, result, stats })
}

fn search_context(session: &mut Session, s: Subject, other: &str, opts: &Options) -> Result<ContextSearch, CliError> {
    let other_doc = parse_any(other)?;
    let h = session.subject(other_doc, Command::Outcome)?;
    let g = session.game(s, opts.budget)?;
    let h = session.game(h, opts.budget)?;
    let a = session.engine.grundy_set(&session.store, g);
    let b = session.engine.grundy_set(&session.store, h);
    let bound = opts.bound.unwrap_or_else(|| a.iter().chain(b.iter()).max().unwrap_or(0) + 2);
    let witness = session.engine.distinguish_by_context(&session.store, g, h, bound);
    let other_outcome = session.engine.outcome(&session.store, h);
    Ok(ContextSearch { other_outcome, bound, witness })
}

fn reduce(session: &mut Session, mut p: JoinPosition, opts: &Options) -> Result<Reduction, CliError> {
    let mut steps = Vec::new();
    if let Some(swaps) = &opts.sigma {
        let sigma = Involution::parse_swaps(p.shape(), swaps)?;
        let r = reduce_symmetry(&p, &sigma, &session.store, &mut session.engine)?;
        steps.push(symmetry_step(&p, &sigma));
        p = r;
    }
    loop {
        let r = reduce_zero_upper(&p, &session.store, &mut session.engine);
        if r.shape().len() < p.shape().len() {
            let kept: Vec<&str> = r.shape().labels().iter().map(String::as_str).collect();
            let removed = p.shape().labels().iter().filter(|l| !kept.contains(&l.as_str())).cloned().collect();
            steps.push(ReductionStep::ZeroUpperSet { removed });
            p = r;
        }
        if p.shape().is_empty() || p.shape().len() > INVOLUTION_LIMIT {
            break;
        }
        let best = weakly_op_involutions(p.shape(), INVOLUTION_LIMIT)?
            .into_iter()
            .filter(|s| !s.is_identity())
            .filter(|s| check_symmetry(&p, s, &session.store, &mut session.engine).is_ok())
            .min_by_key(|s| s.fixed_points().len());
        let Some(sigma) = best else { break };
        steps.push(symmetry_step(&p, &sigma));
        p = p.restrict(&sigma.fixed_points());
    }
    Ok(Reduction { certified_p_position: p.shape().is_empty(), reduced: join_to_json(&session.store, &p), steps })
}

fn symmetry_step(p: &JoinPosition, sigma: &Involution) -> ReductionStep {
    let moved: Vec<usize> = (0..sigma.len()).filter(|&i| sigma.apply(i) != i).collect();
    ReductionStep::Symmetry { swaps: swap_labels(p.shape(), sigma), removed: labels_of(p.shape(), &moved) }
}

fn bench(session: &mut Session, p: &JoinPosition, opts: &Options) -> Result<(Bench, EvalStats), CliError> {
    if p.shape().is_empty() {
        return Err(CliError::Precondition("cannot benchmark the empty shape".into()));
    }
    let start = Instant::now();
    let sets: Vec<GrundySet> = p.components().iter().map(|&g| session.engine.grundy_set(&session.store, g)).collect();
    let eval = evaluate(p.shape(), &sets, &mut session.store, &mut session.engine, opts.budget)?;
    let decomposition = DecompositionRun {
        grundy: mex(&eval.result),
        tree_nodes: eval.decomposition.node_count(),
        indecomposable_nodes: eval.decomposition.count_indecomposable(),
        micros: start.elapsed().as_micros() as u64,
    };
    let start = Instant::now();
    let naive = match p.to_game(&mut session.store, opts.budget) {
        Ok(g) => NaiveRun {
            positions: Some(session.store.subgame_count(g)),
            grundy: Some(session.engine.grundy_number(&session.store, g)),
            error: None,
            micros: start.elapsed().as_micros() as u64,
        },
        Err(e) => NaiveRun {
            positions: None,
            grundy: None,
            error: Some(e.to_string()),
            micros: start.elapsed().as_micros() as u64,
        },
    };
    Ok((Bench { naive, decomposition }, eval.stats))
}

fn list(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}

fn pairs(items: &[(String, String)]) -> String {
    let parts: Vec<String> = items.iter().map(|(a, b)| format!("({a} {b})")).collect();
    if parts.is_empty() {
        "identity".into()
    } else {
        parts.join("")
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering with the same fields as the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.name());
        let _ = writeln!(out, "input sha256: {}", self.input_digest);
        match &self.result {
            Payload::Grundy { value } => {
                let _ = writeln!(out, "grundy: {value}");
            }
            Payload::GrundySet { set, mex } => {
                let _ = writeln!(out, "grundy set: {set}");
                let _ = writeln!(out, "mex: {mex}");
            }
            Payload::GrundyK { k, value } => {
                let _ = writeln!(out, "k: {k}");
                let _ = writeln!(out, "value: {value}");
            }
            Payload::Outcome { outcome, grundy, context } => {
                let _ = writeln!(out, "outcome: {outcome}");
                let _ = writeln!(out, "grundy: {grundy}");
                if let Some(c) = context {
                    let _ = writeln!(out, "other outcome: {}", c.other_outcome);
                    let _ = writeln!(out, "context bound: {}", c.bound);
                    match c.witness {
                        Some((l, r)) => {
                            let _ = writeln!(out, "witness: <{l}> + (_ : <{r}>)");
                        }
                        None => {
                            let _ = writeln!(out, "witness: none");
                        }
                    }
                }
            }
            Payload::Evaluation { grundy_set, grundy, decomposition } => {
                let _ = writeln!(out, "grundy set: {grundy_set}");
                let _ = writeln!(out, "grundy: {grundy}");
                let _ = writeln!(out, "decomposition:");
                decomposition.render(1, &mut out);
            }
            Payload::Decomposition { tree, series_parallel } => {
                let _ = writeln!(out, "series-parallel: {series_parallel}");
                let _ = writeln!(out, "tree:");
                tree.render(1, &mut out);
            }
            Payload::Reduction(r) => {
                for (k, step) in r.steps.iter().enumerate() {
                    match step {
                        ReductionStep::ZeroUpperSet { removed } => {
                            let _ = writeln!(out, "step {}: zero upper set, removed {}", k + 1, list(removed));
                        }
                        ReductionStep::Symmetry { swaps, removed } => {
                            let _ =
                                writeln!(out, "step {}: symmetry {}, removed {}", k + 1, pairs(swaps), list(removed));
                        }
                    }
                }
                let _ = writeln!(out, "certified P-position: {}", r.certified_p_position);
                let _ = writeln!(out, "reduced: {}", r.reduced);
            }
            Payload::Involutions { count, involutions } => {
                let _ = writeln!(out, "count: {count}");
                for s in involutions {
                    let _ = writeln!(out, "  {}", pairs(s));
                }
            }
            Payload::Bench(b) => {
                let n = &b.naive;
                match (&n.error, n.positions, n.grundy) {
                    (Some(e), _, _) => {
                        let _ = writeln!(out, "naive: failed after {} us: {e}", n.micros);
                    }
                    (None, Some(pos), Some(g)) => {
                        let _ = writeln!(out, "naive: grundy {g}, {pos} positions, {} us", n.micros);
                    }
                    _ => {}
                }
                let d = &b.decomposition;
                let _ = writeln!(
                    out,
                    "decomposition: grundy {}, {} tree nodes, {} indecomposable, {} us",
                    d.grundy, d.tree_nodes, d.indecomposable_nodes, d.micros
                );
            }
        }
        if let Some(s) = &self.stats {
            let _ = writeln!(
                out,
                "stats: fast-path nodes {}, fallback nodes {}, max quotient {}, positions expanded {}",
                s.fast_path_nodes, s.fallback_nodes, s.max_quotient_size, s.positions_expanded
            );
        }
        out
    }
}
