//! Combinatorial embeddings of multigraphs in surfaces.
//!
//! An embedding is a rotation system (cyclic order of edge-ends around each
//! vertex) together with a signature `±1` per edge. Edge `e` has two ends,
//! `2e` and `2e + 1`; negative edges flip the local orientation, which is what
//! allows nonorientable surfaces.

mod catalog;
mod faces;
mod split;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SimpleGraph;

pub use catalog::{catalog_members, triangulation_catalog, triangulation_genus};
pub use faces::{Dart, FacialWalk};
pub use split::{split_at_faces, Splitting};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("underlying graph is disconnected")]
    Disconnected,
    #[error("facial walks {0} and {1} share vertex {2}")]
    FacesNotDisjoint(usize, usize, usize),
    #[error("facial walk {0} repeats vertex {1}")]
    NotACycle(usize, usize),
    #[error("walk {0} is not a facial walk of the embedding")]
    NotAFace(usize),
    #[error("K_{0} is not in the triangulation catalog")]
    NotInCatalog(usize),
    #[error("catalog entry K_{m} failed validation: {reason}")]
    CatalogCorrupt { m: usize, reason: String },
    #[error("malformed embedding JSON: {0}")]
    Json(String),
}

/// An edge of an embedded multigraph. `ends[s]` is the vertex holding edge-end `2e + s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedEdge {
    pub ends: [usize; 2],
    pub signature: i8,
    /// Optional `(i, j)` tag, used for the labelled parallel copies in the vortex construction.
    pub label: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiEmbedding {
    edges: Vec<EmbeddedEdge>,
    rotation: Vec<Vec<usize>>,
    /// Position of each edge-end within its vertex's rotation.
    pos: Vec<usize>,
}

#[inline]
pub fn end_edge(h: usize) -> usize {
    h / 2
}

#[inline]
pub fn twin(h: usize) -> usize {
    h ^ 1
}

impl MultiEmbedding {
    /// Builds an embedding from per-vertex rotations of edge-end ids.
    ///
    /// `signatures` and `labels` are indexed by edge; the edge count is
    /// `signatures.len()`.
    pub fn new(
        rotation: Vec<Vec<usize>>,
        signatures: Vec<i8>,
        labels: Vec<Option<(usize, usize)>>,
    ) -> Result<Self, EmbeddingError> {
        let m = signatures.len();
        if labels.len() != m {
            return Err(EmbeddingError::MalformedRotation(format!("{} labels for {m} edges", labels.len())));
        }
        let mut owner = vec![usize::MAX; 2 * m];
        for (v, rot) in rotation.iter().enumerate() {
            for &h in rot {
                if h >= 2 * m {
                    return Err(EmbeddingError::MalformedRotation(format!(
                        "edge-end {h} at vertex {v} refers to a missing edge"
                    )));
                }
                if owner[h] != usize::MAX {
                    return Err(EmbeddingError::MalformedRotation(format!(
                        "edge-end {h} appears twice (vertices {} and {v})",
                        owner[h]
                    )));
                }
                owner[h] = v;
            }
        }
        if let Some(h) = owner.iter().position(|&v| v == usize::MAX) {
            return Err(EmbeddingError::MalformedRotation(format!("edge-end {h} is missing")));
        }
        let mut edges = Vec::with_capacity(m);
        for e in 0..m {
            let ends = [owner[2 * e], owner[2 * e + 1]];
            if ends[0] == ends[1] {
                return Err(EmbeddingError::MalformedRotation(format!("edge {e} is a loop")));
            }
            if signatures[e] != 1 && signatures[e] != -1 {
                return Err(EmbeddingError::MalformedRotation(format!("edge {e} has signature {}", signatures[e])));
            }
            edges.push(EmbeddedEdge { ends, signature: signatures[e], label: labels[e] });
        }
        Ok(Self::assemble(edges, rotation))
    }

    fn assemble(edges: Vec<EmbeddedEdge>, rotation: Vec<Vec<usize>>) -> Self {
        let mut pos = vec![0; 2 * edges.len()];
        for rot in &rotation {
            for (i, &h) in rot.iter().enumerate() {
                pos[h] = i;
            }
        }
        MultiEmbedding { edges, rotation, pos }
    }

    /// Orientable embedding of a simple graph from clockwise neighbour orders.
    /// Edges are numbered in lexicographic `(u, v)` order with `u < v`; the end
    /// at `u` is `2e`.
    pub fn from_neighbor_rotation(order: &[Vec<usize>]) -> Result<Self, EmbeddingError> {
        let mut ids = BTreeMap::new();
        for (u, nb) in order.iter().enumerate() {
            for &v in nb {
                if u < v {
                    ids.insert((u, v), 0);
                }
            }
        }
        for (e, id) in ids.values_mut().enumerate() {
            *id = e;
        }
        let mut rotation = Vec::with_capacity(order.len());
        for (u, nb) in order.iter().enumerate() {
            let mut rot = Vec::with_capacity(nb.len());
            for &v in nb {
                let key = (u.min(v), u.max(v));
                let Some(&e) = ids.get(&key) else {
                    return Err(EmbeddingError::MalformedRotation(format!("edge {u}-{v} only listed at one endpoint")));
                };
                rot.push(2 * e + usize::from(u > v));
            }
            rotation.push(rot);
        }
        let m = ids.len();
        Self::new(rotation, vec![1; m], vec![None; m])
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EmbeddedEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &EmbeddedEdge {
        &self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Vertex holding edge-end `h`.
    pub fn end_vertex(&self, h: usize) -> usize {
        self.edges[h / 2].ends[h % 2]
    }

    pub(crate) fn succ(&self, h: usize) -> usize {
        let rot = &self.rotation[self.end_vertex(h)];
        rot[(self.pos[h] + 1) % rot.len()]
    }

    pub(crate) fn pred(&self, h: usize) -> usize {
        let rot = &self.rotation[self.end_vertex(h)];
        rot[(self.pos[h] + rot.len() - 1) % rot.len()]
    }

    pub fn is_orientable_signed(&self) -> bool {
        self.edges.iter().all(|e| e.signature == 1)
    }

    /// Underlying simple graph (parallel edges collapsed).
    pub fn to_simple_graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.n());
        for e in &self.edges {
            g.add_edge(e.ends[0], e.ends[1]);
        }
        g
    }

    pub fn is_simple(&self) -> bool {
        self.to_simple_graph().edge_count() == self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        self.to_simple_graph().is_connected()
    }

    /// Removes `v` and its edges. Vertices above `v` shift down by one and the
    /// surviving edges are renumbered in order.
    pub fn delete_vertex(&self, v: usize) -> Result<MultiEmbedding, EmbeddingError> {
        let mut new_edge = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        let shift = |w: usize| if w > v { w - 1 } else { w };
        for (e, edge) in self.edges.iter().enumerate() {
            if !edge.ends.contains(&v) {
                new_edge[e] = edges.len();
                edges.push(EmbeddedEdge { ends: edge.ends.map(shift), ..edge.clone() });
            }
        }
        let rotation: Vec<Vec<usize>> = (0..self.n())
            .filter(|&w| w != v)
            .map(|w| {
                self.rotation[w]
                    .iter()
                    .filter(|&&h| new_edge[h / 2] != usize::MAX)
                    .map(|&h| 2 * new_edge[h / 2] + h % 2)
                    .collect()
            })
            .collect();
        let out = Self::assemble(edges, rotation);
        if !out.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> EmbeddingJson {
        EmbeddingJson {
            rotations: self.rotation.iter().cloned().enumerate().collect(),
            signatures: self.edges.iter().enumerate().map(|(e, x)| (e, x.signature)).collect(),
            edge_labels: self.edges.iter().enumerate().filter_map(|(e, x)| x.label.map(|(i, j)| (e, [i, j]))).collect(),
        }
    }

    pub fn from_json(doc: &EmbeddingJson) -> Result<Self, EmbeddingError> {
        let n = doc.rotations.len();
        if doc.rotations.keys().enumerate().any(|(i, &v)| i != v) {
            return Err(EmbeddingError::Json(format!("rotation keys must be exactly 0..{n}")));
        }
        let ends: usize = doc.rotations.values().map(Vec::len).sum();
        if !ends.is_multiple_of(2) {
            return Err(EmbeddingError::MalformedRotation(format!("odd number of edge-ends ({ends})")));
        }
        let m = ends / 2;
        let mut signatures = vec![1i8; m];
        for (&e, &s) in &doc.signatures {
            *signatures.get_mut(e).ok_or_else(|| EmbeddingError::Json(format!("signature for missing edge {e}")))? = s;
        }
        let mut labels = vec![None; m];
        for (&e, &[i, j]) in &doc.edge_labels {
            *labels.get_mut(e).ok_or_else(|| EmbeddingError::Json(format!("label for missing edge {e}")))? =
                Some((i, j));
        }
        Self::new(doc.rotations.values().cloned().collect(), signatures, labels)
    }
}

/// Wire form: `{"rotations": {v: [edge-end ids]}, "signatures": {e: ±1}, "edge_labels": {e: [i,j]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub rotations: BTreeMap<usize, Vec<usize>>,
    #[serde(default)]
    pub signatures: BTreeMap<usize, i8>,
    #[serde(default)]
    pub edge_labels: BTreeMap<usize, [usize; 2]>,
}

impl Serialize for MultiEmbedding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiEmbedding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = EmbeddingJson::deserialize(d)?;
        MultiEmbedding::from_json(&doc).map_err(serde::de::Error::custom)
    }
}

/// Planar embedding of a cycle `0, 1, ..., m-1`.
pub fn planar_cycle(m: usize) -> MultiEmbedding {
    let order: Vec<Vec<usize>> = (0..m).map(|v| vec![(v + m - 1) % m, (v + 1) % m]).collect();
    MultiEmbedding::from_neighbor_rotation(&order).expect("cycle rotation is well formed")
}

/// Planar embedding of the grid `L_n`, vertex indices as in [`crate::graph::grid_graph`].
/// Every unit square is a face.
pub fn planar_grid(n: usize) -> MultiEmbedding {
    let idx = |x: usize, y: usize| (x - 1) * n + (y - 1);
    let mut order = vec![Vec::new(); n * n];
    for x in 1..=n {
        for y in 1..=n {
            let nb = &mut order[idx(x, y)];
            // north, east, south, west
            if y < n {
                nb.push(idx(x, y + 1));
            }
            if x < n {
                nb.push(idx(x + 1, y));
            }
            if y > 1 {
                nb.push(idx(x, y - 1));
            }
            if x > 1 {
                nb.push(idx(x - 1, y));
            }
        }
    }
    MultiEmbedding::from_neighbor_rotation(&order).expect("grid rotation is well formed")
}
