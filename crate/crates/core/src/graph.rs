//! Simple undirected graphs with provenance labels, plus the generators and
//! algebraic operations the constructions are assembled from.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Provenance tag carried by a vertex through constructions.
///
/// `Pair(v, i)` names the `i`-th copy of `v` in a lexicographic product,
/// `Triple(x, y, z)` the `z`-th copy of grid vertex `(x, y)`, and
/// `Split(owner, position)` a vertex created by splitting `owner` at a face
/// (position 0 marks an unsplit face vertex that belongs to itself).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexLabel {
    Plain(usize),
    Pair(usize, usize),
    Triple(usize, usize, usize),
    Split(usize, usize),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Plain(id) => write!(f, "{id}"),
            VertexLabel::Pair(v, i) => write!(f, "({v},{i})"),
            VertexLabel::Triple(x, y, z) => write!(f, "({x},{y},{z})"),
            VertexLabel::Split(owner, pos) => write!(f, "{owner}.{pos}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate label {0}")]
    DuplicateLabel(VertexLabel),
    #[error("vertex set {0:?} is not a clique")]
    NotAClique(Vec<usize>),
    #[error("clique sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("edge {0:?} to drop is not inside the identified clique")]
    DropOutsideClique((usize, usize)),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// Finite simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<BTreeSet<usize>>,
    labels: Vec<Option<VertexLabel>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adj: vec![BTreeSet::new(); n], labels: vec![None; n] }
    }

    /// Builds a graph from an edge list; repeated edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn add_vertex(&mut self, label: Option<VertexLabel>) -> usize {
        self.adj.push(BTreeSet::new());
        self.labels.push(label);
        self.adj.len() - 1
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(fresh)
    }

    /// Adds `uv`; panics on loops or out-of-range vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        self.try_add_edge(u, v).expect("invalid edge")
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        self.adj[v].remove(&u);
        self.adj[u].remove(&v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn label(&self, v: usize) -> Option<&VertexLabel> {
        self.labels[v].as_ref()
    }

    pub fn labels(&self) -> &[Option<VertexLabel>] {
        &self.labels
    }

    pub fn set_label(&mut self, v: usize, label: Option<VertexLabel>) {
        self.labels[v] = label;
    }

    pub fn strip_labels(&self) -> SimpleGraph {
        SimpleGraph { adj: self.adj.clone(), labels: vec![None; self.n()] }
    }

    /// Index from label to vertex.
    pub fn label_index(&self) -> HashMap<VertexLabel, usize> {
        self.labels.iter().enumerate().filter_map(|(v, l)| l.clone().map(|l| (l, v))).collect()
    }

    pub fn find_label(&self, label: &VertexLabel) -> Option<usize> {
        self.labels.iter().position(|l| l.as_ref() == Some(label))
    }

    /// Checks the "labels unique within a graph" invariant.
    pub fn check_labels(&self) -> Result<(), GraphError> {
        let mut seen = BTreeSet::new();
        for l in self.labels.iter().flatten() {
            if !seen.insert(l) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        Ok(())
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).min().unwrap_or(0)
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| u < self.n() && set[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    /// Whether `set` induces a connected subgraph. The empty set is not connected.
    pub fn is_connected_subset(&self, set: &BTreeSet<usize>) -> bool {
        let Some(&start) = set.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if set.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == set.len()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut stack = vec![s];
            let mut members = vec![s];
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Induced subgraph on `vertices` (in the given order); labels carried over.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let pos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = SimpleGraph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            g.labels[i] = self.labels[v].clone();
            for w in self.neighbors(v) {
                if let Some(&j) = pos.get(&w) {
                    g.adj[i].insert(j);
                }
            }
        }
        g
    }

    /// Contracts edge `uv` into `min(u, v)`; the other endpoint is removed and
    /// higher indices shift down by one. Labels of the kept vertex survive.
    pub fn contract(&self, u: usize, v: usize) -> SimpleGraph {
        let (keep, gone) = if u < v { (u, v) } else { (v, u) };
        let map = |w: usize| {
            if w == gone {
                keep
            } else if w > gone {
                w - 1
            } else {
                w
            }
        };
        let mut g = SimpleGraph::new(self.n() - 1);
        for (a, b) in self.edges() {
            let (a, b) = (map(a), map(b));
            if a != b {
                g.add_edge(a, b);
            }
        }
        for w in 0..self.n() {
            if w != gone {
                g.labels[map(w)] = self.labels[w].clone();
            }
        }
        g
    }

    pub fn delete_vertex(&self, v: usize) -> SimpleGraph {
        let keep: Vec<usize> = (0..self.n()).filter(|&w| w != v).collect();
        self.induced(&keep)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            labels: self.labels.iter().enumerate().filter_map(|(v, l)| l.clone().map(|l| (v, l))).collect(),
        }
    }

    pub fn from_json(doc: &GraphJson) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new(doc.n);
        for &[u, v] in &doc.edges {
            g.try_add_edge(u, v)?;
        }
        for (&v, l) in &doc.labels {
            if v >= doc.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: doc.n });
            }
            g.labels[v] = Some(l.clone());
        }
        g.check_labels()?;
        Ok(g)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 0..self.n() {
            match &self.labels[v] {
                Some(l) => writeln!(out, "  {v} [label=\"{l}\"];").unwrap(),
                None => writeln!(out, "  {v};").unwrap(),
            }
        }
        for (u, v) in self.edges() {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Wire form: `{"n": int, "edges": [[u,v],...], "labels": {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub labels: BTreeMap<usize, VertexLabel>,
}

impl Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = GraphJson::deserialize(d)?;
        SimpleGraph::from_json(&doc).map_err(serde::de::Error::custom)
    }
}

pub fn complete_graph(m: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(m);
    for u in 0..m {
        g.labels[u] = Some(VertexLabel::Plain(u));
        for v in u + 1..m {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn cycle_graph(m: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(m);
    for u in 0..m {
        g.labels[u] = Some(VertexLabel::Plain(u));
        if m > 1 {
            let v = (u + 1) % m;
            if u != v {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// The `n`×`n` grid `L_n`; vertex `(x, y)` with `x, y ∈ [1, n]` sits at index
/// `(x-1)·n + (y-1)` and carries label `Pair(x, y)`.
pub fn grid_graph(n: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(n * n);
    let idx = |x: usize, y: usize| (x - 1) * n + (y - 1);
    for x in 1..=n {
        for y in 1..=n {
            g.labels[idx(x, y)] = Some(VertexLabel::Pair(x, y));
            if x < n {
                g.add_edge(idx(x, y), idx(x + 1, y));
            }
            if y < n {
                g.add_edge(idx(x, y), idx(x, y + 1));
            }
        }
    }
    g
}

pub fn petersen_graph() -> SimpleGraph {
    let mut g = SimpleGraph::new(10);
    for i in 0..5 {
        g.labels[i] = Some(VertexLabel::Plain(i));
        g.labels[i + 5] = Some(VertexLabel::Plain(i + 5));
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(i + 5, (i + 2) % 5 + 5);
    }
    g
}

/// Lexicographic product `G[K_k]`: vertex `v` becomes the clique
/// `(v,1)..(v,k)` at indices `v·k .. v·k + k - 1`.
///
/// Copies of a vertex labelled `Pair(x, y)` are labelled `Triple(x, y, i)`;
/// all others become `Pair(v, i)`.
pub fn lex_product(g: &SimpleGraph, k: usize) -> SimpleGraph {
    assert!(k >= 1, "lexicographic product needs k >= 1");
    let n = g.n();
    let mut out = SimpleGraph::new(n * k);
    for v in 0..n {
        for i in 0..k {
            out.labels[v * k + i] = Some(match g.label(v) {
                Some(VertexLabel::Pair(x, y)) => VertexLabel::Triple(*x, *y, i + 1),
                _ => VertexLabel::Pair(v, i + 1),
            });
            for j in i + 1..k {
                out.add_edge(v * k + i, v * k + j);
            }
        }
    }
    for (v, w) in g.edges() {
        for i in 0..k {
            for j in 0..k {
                out.add_edge(v * k + i, w * k + j);
            }
        }
    }
    out
}

/// Index of copy `(v, i)` (1-based `i`) in `lex_product(_, k)`.
pub fn lex_index(v: usize, i: usize, k: usize) -> usize {
    v * k + (i - 1)
}

/// Adds `a` dominant vertices, pairwise adjacent and adjacent to everything.
pub fn add_apex(g: &SimpleGraph, a: usize) -> SimpleGraph {
    let mut out = g.clone();
    let base = next_plain_id(g);
    let old = g.n();
    for j in 0..a {
        let x = out.add_vertex(Some(VertexLabel::Plain(base + j)));
        for w in 0..old + j {
            out.add_edge(x, w);
        }
    }
    out
}

fn next_plain_id(g: &SimpleGraph) -> usize {
    g.labels
        .iter()
        .flatten()
        .filter_map(|l| match l {
            VertexLabel::Plain(id) => Some(id + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0)
        .max(g.n())
}

/// Result of a clique-sum together with where each summand's vertices landed.
#[derive(Clone, Debug)]
pub struct CliqueSum {
    pub graph: SimpleGraph,
    /// `left_map[v]` is the index of `G1`'s vertex `v` in the sum (identity).
    pub left_map: Vec<usize>,
    /// `right_map[w]` is the index of `G2`'s vertex `w` in the sum.
    pub right_map: Vec<usize>,
    pub clique_size: usize,
}

impl CliqueSum {
    /// Disjoint union (empty clique).
    pub fn is_degenerate(&self) -> bool {
        self.clique_size == 0
    }
}

/// Clique-sum of `g1` and `g2`, identifying `c1[i]` with `c2[i]` and then
/// deleting the edges listed in `drop` (given as pairs of `G1` vertices of the
/// identified clique). Identified vertices keep `G1`'s labels; `G2` labels that
/// would collide with a `G1` label are dropped.
pub fn clique_sum(
    g1: &SimpleGraph,
    c1: &[usize],
    g2: &SimpleGraph,
    c2: &[usize],
    drop: &[(usize, usize)],
) -> Result<CliqueSum, GraphError> {
    if c1.len() != c2.len() {
        return Err(GraphError::SizeMismatch { left: c1.len(), right: c2.len() });
    }
    for (g, c) in [(g1, c1), (g2, c2)] {
        if !g.is_clique(c) {
            return Err(GraphError::NotAClique(c.to_vec()));
        }
    }
    let mut out = g1.clone();
    let mut right_map = vec![usize::MAX; g2.n()];
    for (i, &w) in c2.iter().enumerate() {
        right_map[w] = c1[i];
    }
    let taken: BTreeSet<VertexLabel> = g1.labels.iter().flatten().cloned().collect();
    for (slot, label) in right_map.iter_mut().zip(&g2.labels) {
        if *slot == usize::MAX {
            *slot = out.add_vertex(label.clone().filter(|l| !taken.contains(l)));
        }
    }
    for (a, b) in g2.edges() {
        out.add_edge(right_map[a], right_map[b]);
    }
    for &(u, v) in drop {
        if !(c1.contains(&u) && c1.contains(&v)) || u == v {
            return Err(GraphError::DropOutsideClique((u, v)));
        }
        out.remove_edge(u, v);
    }
    Ok(CliqueSum { graph: out, left_map: (0..g1.n()).collect(), right_map, clique_size: c1.len() })
}
