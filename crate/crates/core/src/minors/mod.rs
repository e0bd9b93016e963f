//! Minor models, their verification, and exact desk-scale oracles.
//!
//! A model assigns a branch set of host vertices to each pattern vertex. With
//! multiplicity `k > 1` branch sets may overlap (every host vertex in at most
//! `k` of them), and adjacent pattern vertices only need branch sets that
//! *touch*: share a vertex or are joined by an edge.

mod hadwiger;
mod treewidth;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{complete_graph, CliqueSum, SimpleGraph};

pub use hadwiger::{hadwiger_oracle, HadwigerResult, OracleConfig, OracleError};
pub use treewidth::treewidth_oracle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("host vertex {vertex} lies in {count} branch sets, more than {capacity}")]
    CapacityExceeded { vertex: usize, count: usize, capacity: usize },
    #[error("branch set of pattern vertex {0} misses the chosen side")]
    SideInvalid(usize),
    #[error("models do not compose: {0}")]
    Incompatible(String),
    #[error("malformed model JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub pattern: SimpleGraph,
    pub sets: Vec<BTreeSet<usize>>,
    pub multiplicity: usize,
}

impl MinorModel {
    /// A `K_t` model with the given branch sets.
    pub fn clique(sets: Vec<BTreeSet<usize>>, multiplicity: usize) -> Self {
        MinorModel { pattern: complete_graph(sets.len()).strip_labels(), sets, multiplicity }
    }

    pub fn order(&self) -> usize {
        self.sets.len()
    }

    /// Branch sets containing each host vertex.
    pub fn load(&self, host_n: usize) -> Vec<Vec<usize>> {
        let mut load = vec![Vec::new(); host_n];
        for (x, s) in self.sets.iter().enumerate() {
            for &v in s {
                if v < host_n {
                    load[v].push(x);
                }
            }
        }
        load
    }

    /// Model of `self.pattern` in `inner`'s host, given that `self` lives in
    /// `inner.pattern`: each branch set becomes the union of the inner branch
    /// sets of its vertices. Both models must be standard (multiplicity 1).
    pub fn compose(&self, inner: &MinorModel) -> Result<MinorModel, ModelError> {
        if self.multiplicity != 1 || inner.multiplicity != 1 {
            return Err(ModelError::Incompatible("only standard models compose".into()));
        }
        let mut sets = Vec::with_capacity(self.sets.len());
        for s in &self.sets {
            let mut out = BTreeSet::new();
            for &u in s {
                let part = inner
                    .sets
                    .get(u)
                    .ok_or_else(|| ModelError::Incompatible(format!("vertex {u} has no inner branch set")))?;
                out.extend(part.iter().copied());
            }
            sets.push(out);
        }
        Ok(MinorModel { pattern: self.pattern.clone(), sets, multiplicity: 1 })
    }

    pub fn to_json(&self) -> ModelJson {
        ModelJson {
            pattern_n: self.pattern.n(),
            sets: self.sets.iter().enumerate().map(|(x, s)| (x, s.iter().copied().collect())).collect(),
            k: self.multiplicity,
            pattern_edges: (!self.pattern.is_complete()).then(|| self.pattern.edges().map(|(a, b)| [a, b]).collect()),
        }
    }

    pub fn from_json(doc: &ModelJson) -> Result<Self, ModelError> {
        let t = doc.pattern_n;
        let pattern = match &doc.pattern_edges {
            None => complete_graph(t).strip_labels(),
            Some(edges) => {
                let pairs: Vec<(usize, usize)> = edges.iter().map(|&[a, b]| (a, b)).collect();
                SimpleGraph::from_edges(t, &pairs).map_err(|e| ModelError::Json(e.to_string()))?
            }
        };
        let mut sets = vec![BTreeSet::new(); t];
        for (&x, vs) in &doc.sets {
            let slot = sets
                .get_mut(x)
                .ok_or_else(|| ModelError::Json(format!("branch set for missing pattern vertex {x}")))?;
            slot.extend(vs.iter().copied());
        }
        Ok(MinorModel { pattern, sets, multiplicity: doc.k })
    }
}

/// Wire form: `{"pattern_n": t, "sets": {x: [host vertices]}, "k": multiplicity}`;
/// `pattern_edges` is present only when the pattern is not complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub pattern_n: usize,
    pub sets: BTreeMap<usize, Vec<usize>>,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_edges: Option<Vec<[usize; 2]>>,
}

impl Serialize for MinorModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MinorModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        MinorModel::from_json(&ModelJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelViolation {
    ZeroMultiplicity,
    EmptySet {
        x: usize,
    },
    VertexOutOfRange {
        x: usize,
        vertex: usize,
    },
    /// `component` is one connected piece of the branch set.
    Disconnected {
        x: usize,
        component: Vec<usize>,
    },
    OverCapacity {
        vertex: usize,
        sets: Vec<usize>,
        capacity: usize,
    },
    Untouched {
        x: usize,
        y: usize,
    },
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelViolation::ZeroMultiplicity => write!(f, "multiplicity must be at least 1"),
            ModelViolation::EmptySet { x } => write!(f, "branch set {x} is empty"),
            ModelViolation::VertexOutOfRange { x, vertex } => {
                write!(f, "branch set {x} names host vertex {vertex}, which does not exist")
            }
            ModelViolation::Disconnected { x, component } => {
                write!(f, "branch set {x} is disconnected; one component is {component:?}")
            }
            ModelViolation::OverCapacity { vertex, sets, capacity } => {
                write!(f, "host vertex {vertex} is in branch sets {sets:?} (capacity {capacity})")
            }
            ModelViolation::Untouched { x, y } => {
                write!(f, "pattern edge {x}-{y}: branch sets do not touch")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub violations: Vec<ModelViolation>,
}

impl ModelReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn touch(host: &SimpleGraph, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    a.iter().filter(|&&u| u < host.n()).any(|&u| b.contains(&u) || host.neighbors(u).any(|w| b.contains(&w)))
}

/// Checks every model invariant, collecting all violations with witnesses.
pub fn verify_model(host: &SimpleGraph, model: &MinorModel) -> ModelReport {
    let mut violations = Vec::new();
    let n = host.n();
    if model.multiplicity == 0 {
        violations.push(ModelViolation::ZeroMultiplicity);
    }
    for (x, s) in model.sets.iter().enumerate() {
        if s.is_empty() {
            violations.push(ModelViolation::EmptySet { x });
            continue;
        }
        if let Some(&vertex) = s.iter().find(|&&v| v >= n) {
            violations.push(ModelViolation::VertexOutOfRange { x, vertex });
            continue;
        }
        if !host.is_connected_subset(s) {
            let sub: Vec<usize> = s.iter().copied().collect();
            let comp = host.induced(&sub).components()[0].iter().map(|&i| sub[i]).collect();
            violations.push(ModelViolation::Disconnected { x, component: comp });
        }
    }
    let capacity = model.multiplicity.max(1);
    for (vertex, sets) in model.load(n).into_iter().enumerate() {
        if sets.len() > capacity {
            violations.push(ModelViolation::OverCapacity { vertex, sets, capacity });
        }
    }
    if model.pattern.n() != model.sets.len() {
        // pattern vertices without a branch set behave like empty sets
        for x in model.sets.len()..model.pattern.n() {
            violations.push(ModelViolation::EmptySet { x });
        }
    }
    for (x, y) in model.pattern.edges() {
        if x < model.sets.len() && y < model.sets.len() && !touch(host, &model.sets[x], &model.sets[y]) {
            violations.push(ModelViolation::Untouched { x, y });
        }
    }
    ModelReport { violations }
}

/// Converts an `(H, k)`-model in `G` into an `H`-model in `G[k]`.
///
/// At each host vertex the branch sets containing it, in pattern-vertex order,
/// claim the copies `(v,1), (v,2), ...`.
pub fn model_to_lex(model: &MinorModel, host_n: usize, k: usize) -> Result<MinorModel, ModelError> {
    let load = model.load(host_n);
    let mut sets = vec![BTreeSet::new(); model.sets.len()];
    for (v, xs) in load.iter().enumerate() {
        if xs.len() > k {
            return Err(ModelError::CapacityExceeded { vertex: v, count: xs.len(), capacity: k });
        }
        for (i, &x) in xs.iter().enumerate() {
            sets[x].insert(v * k + i);
        }
    }
    Ok(MinorModel { pattern: model.pattern.clone(), sets, multiplicity: 1 })
}

/// Projects an `H`-model in `G[k]` onto `G` via `(v, i) -> v`, giving an `(H, k)`-model.
pub fn lex_to_model(model: &MinorModel, k: usize) -> MinorModel {
    let sets = model.sets.iter().map(|s| s.iter().map(|&u| u / k).collect()).collect();
    MinorModel { pattern: model.pattern.clone(), sets, multiplicity: k * model.multiplicity.max(1) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Restricts a model in a clique-sum to one summand: every branch set loses
/// its vertices outside that summand. Fails if some branch set has nothing left.
pub fn project_model_cliquesum(model: &MinorModel, sum: &CliqueSum, side: Side) -> Result<MinorModel, ModelError> {
    let map = match side {
        Side::Left => &sum.left_map,
        Side::Right => &sum.right_map,
    };
    let mut back = vec![usize::MAX; sum.graph.n()];
    for (orig, &s) in map.iter().enumerate() {
        back[s] = orig;
    }
    let mut sets = Vec::with_capacity(model.sets.len());
    for (x, s) in model.sets.iter().enumerate() {
        let projected: BTreeSet<usize> =
            s.iter().filter_map(|&v| back.get(v).copied().filter(|&b| b != usize::MAX)).collect();
        if projected.is_empty() {
            return Err(ModelError::SideInvalid(x));
        }
        sets.push(projected);
    }
    Ok(MinorModel { pattern: model.pattern.clone(), sets, multiplicity: model.multiplicity })
}
