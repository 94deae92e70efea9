//! JSON descriptions of games, posets, joins and evaluation inputs.
//!
//! Parsing is split from building: `parse_*` functions validate a document
//! into plain data (references resolved, cycles rejected) without touching a
//! [`GameStore`]; `build` methods then intern the games.
//!
//! Game documents: `{"defs": {"name": GAME, ...}, "root": REF}` or a bare
//! `GAME`, where `GAME` is one of `{"heap": n}`, `{"sum": [REF, ...]}`,
//! `{"ordinal": [REF, REF]}`, `{"options": [REF, ...]}` and a `REF` is a def
//! name or an inline `GAME`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::game::{GameId, GameStore};
use crate::join::JoinPosition;
use crate::ordinal::{GrundySet, Nat};
use crate::poset::{Poset, PosetError};

/// Largest heap size or Grundy value accepted in input documents.
pub const MAX_HEAP: u64 = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("at {path}: {message}")]
    Field { path: String, message: String },
    #[error("at {path}: {source}")]
    Poset {
        path: String,
        #[source]
        source: PosetError,
    },
}

impl FormatError {
    fn field(path: &Path, message: impl Into<String>) -> Self {
        FormatError::Field { path: path.to_string(), message: message.into() }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_owned();
        FormatError::Json { line: e.line(), column: e.column(), message }
    }
}

/// Dotted location inside a document, for error messages.
#[derive(Clone, Default)]
struct Path(Vec<String>);

impl Path {
    fn key(&self, k: &str) -> Path {
        let mut p = self.0.clone();
        p.push(format!(".{k}"));
        Path(p)
    }

    fn idx(&self, i: usize) -> Path {
        let mut p = self.0.clone();
        p.push(format!("[{i}]"));
        Path(p)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("$");
        }
        f.write_str("$")?;
        for part in &self.0 {
            f.write_str(part)?;
        }
        Ok(())
    }
}

/// A validated game expression. `Def(k)` refers to `GameDefs::defs[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameExpr {
    Heap(u64),
    Sum(Vec<GameExpr>),
    Ordinal(Box<GameExpr>, Box<GameExpr>),
    Options(Vec<GameExpr>),
    Def(usize),
}

/// Named game definitions, acyclic and topologically checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GameDefs {
    names: Vec<String>,
    defs: Vec<GameExpr>,
}

impl GameDefs {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn parse(value: Option<&Value>, path: &Path) -> Result<GameDefs, FormatError> {
        let Some(value) = value else { return Ok(GameDefs::default()) };
        let obj = value.as_object().ok_or_else(|| FormatError::field(path, "defs must be an object"))?;
        let names: Vec<String> = obj.keys().cloned().collect();
        let lookup: HashMap<&str, usize> = names.iter().enumerate().map(|(k, n)| (n.as_str(), k)).collect();
        let mut defs = Vec::with_capacity(names.len());
        for (name, v) in obj {
            defs.push(parse_game(v, &lookup, &path.key(name))?);
        }
        let out = GameDefs { names, defs };
        out.check_acyclic(path)?;
        Ok(out)
    }

    fn check_acyclic(&self, path: &Path) -> Result<(), FormatError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut marks = vec![Mark::New; self.defs.len()];
        for start in 0..self.defs.len() {
            if marks[start] != Mark::New {
                continue;
            }
            // (def, refs of def, next ref index)
            let mut stack = vec![(start, def_refs(&self.defs[start]), 0usize)];
            marks[start] = Mark::Active;
            while let Some((d, refs, next)) = stack.last_mut() {
                if let Some(&r) = refs.get(*next) {
                    *next += 1;
                    match marks[r] {
                        Mark::Active => {
                            return Err(FormatError::field(
                                &path.key(&self.names[r]),
                                format!("cyclic reference through {:?}", self.names[*d]),
                            ))
                        }
                        Mark::New => {
                            marks[r] = Mark::Active;
                            let rr = def_refs(&self.defs[r]);
                            stack.push((r, rr, 0));
                        }
                        Mark::Done => {}
                    }
                } else {
                    marks[*d] = Mark::Done;
                    stack.pop();
                }
            }
        }
        Ok(())
    }
}

fn def_refs(e: &GameExpr) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![e];
    while let Some(e) = stack.pop() {
        match e {
            GameExpr::Def(k) => out.push(*k),
            GameExpr::Heap(_) => {}
            GameExpr::Sum(v) | GameExpr::Options(v) => stack.extend(v),
            GameExpr::Ordinal(a, b) => {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    out
}

// Inline nesting depth is bounded by serde_json's recursion limit (128).
fn parse_game(v: &Value, defs: &HashMap<&str, usize>, path: &Path) -> Result<GameExpr, FormatError> {
    match v {
        Value::String(name) => defs
            .get(name.as_str())
            .map(|&k| GameExpr::Def(k))
            .ok_or_else(|| FormatError::field(path, format!("unknown game reference {name:?}"))),
        Value::Object(obj) => {
            if obj.len() != 1 {
                return Err(FormatError::field(
                    path,
                    "a game must have exactly one of the keys heap, sum, ordinal, options",
                ));
            }
            let (key, inner) = obj.iter().next().expect("one entry");
            let path = path.key(key);
            match key.as_str() {
                "heap" => {
                    let n = inner
                        .as_u64()
                        .ok_or_else(|| FormatError::field(&path, "heap size must be a natural number"))?;
                    if n > MAX_HEAP {
                        return Err(FormatError::field(&path, format!("heap size {n} exceeds {MAX_HEAP}")));
                    }
                    Ok(GameExpr::Heap(n))
                }
                "sum" => Ok(GameExpr::Sum(parse_list(inner, defs, &path)?)),
                "options" => Ok(GameExpr::Options(parse_list(inner, defs, &path)?)),
                "ordinal" => {
                    let mut parts = parse_list(inner, defs, &path)?;
                    if parts.len() != 2 {
                        return Err(FormatError::field(&path, "ordinal takes exactly two games"));
                    }
                    let top = parts.pop().expect("two");
                    let base = parts.pop().expect("two");
                    Ok(GameExpr::Ordinal(Box::new(base), Box::new(top)))
                }
                other => Err(FormatError::field(&path, format!("unknown game kind {other:?}"))),
            }
        }
        _ => Err(FormatError::field(path, "expected a game object or a def name")),
    }
}

fn parse_list(v: &Value, defs: &HashMap<&str, usize>, path: &Path) -> Result<Vec<GameExpr>, FormatError> {
    let arr = v.as_array().ok_or_else(|| FormatError::field(path, "expected an array of games"))?;
    arr.iter().enumerate().map(|(k, g)| parse_game(g, defs, &path.idx(k))).collect()
}

/// A parsed game document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameDoc {
    pub defs: GameDefs,
    pub root: GameExpr,
}

impl GameDoc {
    pub fn build(&self, store: &mut GameStore) -> GameId {
        Builder::new(&self.defs).build(&self.root, store)
    }
}

struct Builder<'a> {
    defs: &'a GameDefs,
    built: Vec<Option<GameId>>,
}

impl<'a> Builder<'a> {
    fn new(defs: &'a GameDefs) -> Self {
        Builder { defs, built: vec![None; defs.defs.len()] }
    }

    fn build(&mut self, e: &GameExpr, store: &mut GameStore) -> GameId {
        match e {
            GameExpr::Heap(n) => store.nim_heap(*n as usize),
            GameExpr::Sum(parts) => {
                let mut acc = GameId::ZERO;
                for p in parts {
                    let g = self.build(p, store);
                    acc = store.dsum(acc, g);
                }
                acc
            }
            GameExpr::Ordinal(a, b) => {
                let (a, b) = (self.build(a, store), self.build(b, store));
                store.osum(a, b)
            }
            GameExpr::Options(parts) => {
                let opts: Vec<GameId> = parts.iter().map(|p| self.build(p, store)).collect();
                store.intern_known(opts)
            }
            GameExpr::Def(k) => {
                if self.built[*k].is_none() {
                    // Build referenced defs first, in post-order, so def chains never recurse.
                    for d in self.pending_defs(*k) {
                        let g = self.build(&self.defs.defs[d], store);
                        self.built[d] = Some(g);
                    }
                }
                self.built[*k].expect("built above")
            }
        }
    }
}

impl Builder<'_> {
    fn pending_defs(&self, root: usize) -> Vec<usize> {
        let mut order = Vec::new();
        let mut seen = vec![false; self.defs.defs.len()];
        seen[root] = true;
        let mut stack = vec![(root, def_refs(&self.defs.defs[root]), 0usize)];
        while let Some((d, refs, next)) = stack.last_mut() {
            if let Some(&r) = refs.get(*next) {
                *next += 1;
                if !seen[r] && self.built[r].is_none() {
                    seen[r] = true;
                    let rr = def_refs(&self.defs.defs[r]);
                    stack.push((r, rr, 0));
                }
            } else {
                order.push(*d);
                stack.pop();
            }
        }
        order
    }
}

fn parse_value(text: &str) -> Result<Value, FormatError> {
    Ok(serde_json::from_str(text)?)
}

fn as_object<'v>(v: &'v Value, path: &Path) -> Result<&'v Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| FormatError::field(path, "expected an object"))
}

fn reject_unknown_keys(obj: &Map<String, Value>, allowed: &[&str], path: &Path) -> Result<(), FormatError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(FormatError::field(&path.key(k), "unexpected field")),
        None => Ok(()),
    }
}

/// Parses a game document or a bare game.
pub fn parse_game_doc(text: &str) -> Result<GameDoc, FormatError> {
    game_doc_from_value(&parse_value(text)?)
}

pub fn game_doc_from_value(v: &Value) -> Result<GameDoc, FormatError> {
    let root = Path::default();
    let obj = as_object(v, &root)?;
    if obj.contains_key("root") || obj.contains_key("defs") {
        reject_unknown_keys(obj, &["defs", "root"], &root)?;
        let defs = GameDefs::parse(obj.get("defs"), &root.key("defs"))?;
        let lookup = defs.names.iter().enumerate().map(|(k, n)| (n.as_str(), k)).collect();
        let r = obj.get("root").ok_or_else(|| FormatError::field(&root, "missing field root"))?;
        let expr = parse_game(r, &lookup, &root.key("root"))?;
        Ok(GameDoc { defs, root: expr })
    } else {
        let expr = parse_game(v, &HashMap::new(), &root)?;
        Ok(GameDoc { defs: GameDefs::default(), root: expr })
    }
}

/// Poset JSON: `{"elements": [...], "relations": [[a, b], ...]}`; each pair reads `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

impl PosetJson {
    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        let pairs: Vec<(&str, &str)> = self.relations.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let elems: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        Poset::from_relations(&elems, &pairs)
    }

    /// Elements with covering relations only.
    pub fn from_poset(p: &Poset) -> Self {
        PosetJson {
            elements: p.labels().to_vec(),
            relations: p
                .cover_pairs()
                .into_iter()
                .map(|(i, j)| (p.label(i).to_owned(), p.label(j).to_owned()))
                .collect(),
        }
    }
}

fn poset_from_value(v: &Value, path: &Path) -> Result<Poset, FormatError> {
    let pj: PosetJson =
        serde_json::from_value(v.clone()).map_err(|e| FormatError::field(path, format!("invalid poset: {e}")))?;
    pj.to_poset().map_err(|source| FormatError::Poset { path: path.to_string(), source })
}

pub fn parse_poset(text: &str) -> Result<Poset, FormatError> {
    let v = parse_value(text)?;
    // Accept a join or evaluate document and use its shape.
    if let Some(shape) = v.as_object().and_then(|o| o.get("shape")) {
        return poset_from_value(shape, &Path::default().key("shape"));
    }
    poset_from_value(&v, &Path::default())
}

/// A parsed join document: `{"shape": POSET, "components": {"label": REF}, "defs": {...}}`.
#[derive(Clone, Debug)]
pub struct JoinDoc {
    pub shape: Poset,
    pub defs: GameDefs,
    /// One expression per shape element; omitted components are `{"heap": 0}`.
    pub components: Vec<GameExpr>,
}

impl JoinDoc {
    pub fn build(&self, store: &mut GameStore) -> JoinPosition {
        let mut b = Builder::new(&self.defs);
        let comps = self.components.iter().map(|e| b.build(e, store)).collect();
        JoinPosition::new(self.shape.clone(), comps).expect("one component per element")
    }
}

pub fn parse_join(text: &str) -> Result<JoinDoc, FormatError> {
    join_from_value(&parse_value(text)?)
}

pub fn join_from_value(v: &Value) -> Result<JoinDoc, FormatError> {
    let root = Path::default();
    let obj = as_object(v, &root)?;
    reject_unknown_keys(obj, &["shape", "components", "defs"], &root)?;
    let shape_v = obj.get("shape").ok_or_else(|| FormatError::field(&root, "missing field shape"))?;
    let shape = poset_from_value(shape_v, &root.key("shape"))?;
    let defs = GameDefs::parse(obj.get("defs"), &root.key("defs"))?;
    let lookup = defs.names.iter().enumerate().map(|(k, n)| (n.as_str(), k)).collect();
    let mut components = vec![GameExpr::Heap(0); shape.len()];
    if let Some(c) = obj.get("components") {
        let path = root.key("components");
        for (label, g) in as_object(c, &path)? {
            let path = path.key(label);
            let i = shape
                .index_of(label)
                .ok_or_else(|| FormatError::field(&path, format!("{label:?} is not a shape element")))?;
            components[i] = parse_game(g, &lookup, &path)?;
        }
    }
    Ok(JoinDoc { shape, defs, components })
}

/// A parsed evaluation input: `{"shape": POSET, "leaf_sets": {"label": [n, ...]}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluateDoc {
    pub shape: Poset,
    /// One set per shape element; omitted elements get the empty set.
    pub leaf_sets: Vec<GrundySet>,
}

pub fn parse_evaluate(text: &str) -> Result<EvaluateDoc, FormatError> {
    evaluate_from_value(&parse_value(text)?)
}

pub fn evaluate_from_value(v: &Value) -> Result<EvaluateDoc, FormatError> {
    let root = Path::default();
    let obj = as_object(v, &root)?;
    reject_unknown_keys(obj, &["shape", "leaf_sets"], &root)?;
    let shape_v = obj.get("shape").ok_or_else(|| FormatError::field(&root, "missing field shape"))?;
    let shape = poset_from_value(shape_v, &root.key("shape"))?;
    let mut leaf_sets = vec![GrundySet::new(); shape.len()];
    if let Some(ls) = obj.get("leaf_sets") {
        let path = root.key("leaf_sets");
        for (label, set) in as_object(ls, &path)? {
            let path = path.key(label);
            let i = shape
                .index_of(label)
                .ok_or_else(|| FormatError::field(&path, format!("{label:?} is not a shape element")))?;
            let arr = set.as_array().ok_or_else(|| FormatError::field(&path, "expected an array"))?;
            let mut values = Vec::with_capacity(arr.len());
            for (k, x) in arr.iter().enumerate() {
                let n = x.as_u64().ok_or_else(|| FormatError::field(&path.idx(k), "expected a natural number"))?;
                if n > MAX_HEAP {
                    return Err(FormatError::field(&path.idx(k), format!("value {n} exceeds {MAX_HEAP}")));
                }
                values.push(n as Nat);
            }
            leaf_sets[i] = values.into();
        }
    }
    Ok(EvaluateDoc { shape, leaf_sets })
}

/// Any of the accepted input documents.
#[derive(Clone, Debug)]
pub enum InputDoc {
    Game(GameDoc),
    Join(JoinDoc),
    Evaluate(EvaluateDoc),
    Poset(Poset),
}

/// Classifies a document by its top-level keys and parses it.
pub fn parse_any(text: &str) -> Result<InputDoc, FormatError> {
    let v = parse_value(text)?;
    let obj = as_object(&v, &Path::default())?;
    if obj.contains_key("leaf_sets") {
        evaluate_from_value(&v).map(InputDoc::Evaluate)
    } else if obj.contains_key("shape") {
        join_from_value(&v).map(InputDoc::Join)
    } else if obj.contains_key("elements") {
        poset_from_value(&v, &Path::default()).map(InputDoc::Poset)
    } else {
        game_doc_from_value(&v).map(InputDoc::Game)
    }
}

/// Writes the game reachable from `g` as a document with one def per subgame.
pub fn game_to_json(store: &GameStore, g: GameId) -> Value {
    let mut defs = BTreeMap::new();
    for node in store.reachable_postorder(g) {
        let opts: Vec<Value> = store.options(node).iter().map(|o| Value::String(def_name(*o))).collect();
        defs.insert(def_name(node), serde_json::json!({ "options": opts }));
    }
    serde_json::json!({ "defs": defs, "root": def_name(g) })
}

fn def_name(g: GameId) -> String {
    format!("g{}", g.index())
}

/// Writes a join document whose components all refer to shared defs.
pub fn join_to_json(store: &GameStore, p: &JoinPosition) -> Value {
    let mut defs = BTreeMap::new();
    let mut comps = BTreeMap::new();
    for (i, &c) in p.components().iter().enumerate() {
        for node in store.reachable_postorder(c) {
            let opts: Vec<Value> = store.options(node).iter().map(|o| Value::String(def_name(*o))).collect();
            defs.insert(def_name(node), serde_json::json!({ "options": opts }));
        }
        comps.insert(p.shape().label(i).to_owned(), Value::String(def_name(c)));
    }
    serde_json::json!({
        "shape": PosetJson::from_poset(p.shape()),
        "defs": defs,
        "components": comps,
    })
}
