//! Vortices (graphs with a circular decomposition along a perimeter) and
//! almost-embeddable structures built from an embedded base graph, vortices
//! glued into faces, and apex vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{EmbeddingJson, MultiEmbedding};
use crate::graph::{GraphJson, SimpleGraph, VertexLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VortexError {
    #[error("invalid circular decomposition (property {property}): {violation}")]
    InvalidDecomposition { property: u8, violation: CircularViolation },
    #[error("malformed vortex JSON: {0}")]
    Json(String),
}

/// A graph with perimeter `Ω` and one bag per perimeter position
/// (`bags[i]` is `C⟨perimeter[i]⟩`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vortex {
    pub graph: SimpleGraph,
    pub perimeter: Vec<usize>,
    pub bags: Vec<BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircularViolation {
    Malformed {
        reason: String,
    },
    /// Perimeter vertex `w` is missing from its own bag.
    OwnBag {
        w: usize,
    },
    /// Non-perimeter vertex `u` lies in no bag.
    UncoveredVertex {
        u: usize,
    },
    UncoveredEdge {
        u: usize,
        v: usize,
    },
    /// The bag positions holding `u` are not circularly consecutive.
    NotConsecutive {
        u: usize,
        positions: Vec<usize>,
    },
}

impl CircularViolation {
    /// Index of the violated decomposition property (0 for structural problems).
    pub fn property(&self) -> u8 {
        match self {
            CircularViolation::Malformed { .. } => 0,
            CircularViolation::OwnBag { .. } => 1,
            CircularViolation::UncoveredVertex { .. } => 2,
            CircularViolation::UncoveredEdge { .. } => 3,
            CircularViolation::NotConsecutive { .. } => 4,
        }
    }
}

impl fmt::Display for CircularViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircularViolation::Malformed { reason } => write!(f, "{reason}"),
            CircularViolation::OwnBag { w } => write!(f, "perimeter vertex {w} is not in its own bag"),
            CircularViolation::UncoveredVertex { u } => write!(f, "vertex {u} is in no bag"),
            CircularViolation::UncoveredEdge { u, v } => write!(f, "edge {u}-{v} is in no bag"),
            CircularViolation::NotConsecutive { u, positions } => {
                write!(f, "vertex {u} occupies non-consecutive bags {positions:?}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CircularReport {
    pub violations: Vec<CircularViolation>,
}

impl CircularReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed_properties(&self) -> BTreeSet<u8> {
        self.violations.iter().map(CircularViolation::property).collect()
    }
}

/// Whether `positions` (sorted, within `0..t`) form one circular run.
fn circularly_consecutive(positions: &[usize], t: usize) -> bool {
    if positions.len() <= 1 || positions.len() == t {
        return true;
    }
    let present: BTreeSet<usize> = positions.iter().copied().collect();
    let run_ends = positions.iter().filter(|&&i| !present.contains(&((i + 1) % t))).count();
    run_ends == 1
}

impl Vortex {
    pub fn validate(&self) -> CircularReport {
        validate_circular(self)
    }

    pub fn width(&self) -> Result<usize, VortexError> {
        vortex_width(self)
    }

    /// Maximum bag size minus one, without validating.
    fn raw_width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }
}

pub fn validate_circular(vortex: &Vortex) -> CircularReport {
    let mut violations = Vec::new();
    let n = vortex.graph.n();
    let t = vortex.perimeter.len();
    let malformed = |reason: String| CircularViolation::Malformed { reason };
    if vortex.bags.len() != t {
        violations.push(malformed(format!("{} bags for a perimeter of length {t}", vortex.bags.len())));
        return CircularReport { violations };
    }
    let mut on_perimeter = vec![false; n];
    for &w in &vortex.perimeter {
        if w >= n {
            violations.push(malformed(format!("perimeter vertex {w} out of range")));
        } else if std::mem::replace(&mut on_perimeter[w], true) {
            violations.push(malformed(format!("perimeter repeats vertex {w}")));
        }
    }
    for bag in &vortex.bags {
        if let Some(&u) = bag.iter().find(|&&u| u >= n) {
            violations.push(malformed(format!("bag vertex {u} out of range")));
        }
    }
    if !violations.is_empty() {
        return CircularReport { violations };
    }

    for (i, &w) in vortex.perimeter.iter().enumerate() {
        if !vortex.bags[i].contains(&w) {
            violations.push(CircularViolation::OwnBag { w });
        }
    }
    let mut positions = vec![Vec::new(); n];
    for (i, bag) in vortex.bags.iter().enumerate() {
        for &u in bag {
            positions[u].push(i);
        }
    }
    for u in 0..n {
        if !on_perimeter[u] && positions[u].is_empty() {
            violations.push(CircularViolation::UncoveredVertex { u });
        }
    }
    for (u, v) in vortex.graph.edges() {
        if !vortex.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            violations.push(CircularViolation::UncoveredEdge { u, v });
        }
    }
    for (u, pos) in positions.into_iter().enumerate() {
        if !circularly_consecutive(&pos, t) {
            violations.push(CircularViolation::NotConsecutive { u, positions: pos });
        }
    }
    CircularReport { violations }
}

pub fn vortex_width(vortex: &Vortex) -> Result<usize, VortexError> {
    let report = validate_circular(vortex);
    match report.violations.into_iter().next() {
        Some(violation) => Err(VortexError::InvalidDecomposition { property: violation.property(), violation }),
        None => Ok(vortex.raw_width()),
    }
}

/// Declared class parameters `(g, p, k, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub g: usize,
    pub p: usize,
    pub k: usize,
    pub a: usize,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, p={}, k={}, a={})", self.g, self.p, self.k, self.a)
    }
}

/// A vortex placed in the global vertex space of an [`AlmostEmbeddable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachedVortex {
    pub vortex: Vortex,
    /// Global index of each local vortex vertex.
    pub vertex_map: Vec<usize>,
    /// Facial cycle of the base (global indices) whose disc the vortex fills.
    pub disc_face: Vec<usize>,
}

impl AttachedVortex {
    pub fn global_perimeter(&self) -> Vec<usize> {
        self.vortex.perimeter.iter().map(|&w| self.vertex_map[w]).collect()
    }
}

/// `G = G_0 ∪ G_1 ∪ ... ∪ G_q` plus apex vertices, over global vertices
/// `0..n`. Base vertex `i` of the embedding is global vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostEmbeddable {
    pub n: usize,
    pub labels: Vec<Option<VertexLabel>>,
    pub base: MultiEmbedding,
    pub vortices: Vec<AttachedVortex>,
    pub apex: Vec<usize>,
    /// Edges incident to apex vertices.
    pub apex_edges: Vec<(usize, usize)>,
    pub declared: Params,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureViolation {
    Malformed {
        reason: String,
    },
    BaseDisconnected,
    GenusExceeded {
        genus: usize,
        bound: usize,
    },
    TooManyVortices {
        count: usize,
        bound: usize,
    },
    WidthExceeded {
        vortex: usize,
        width: usize,
        bound: usize,
    },
    TooManyApices {
        count: usize,
        bound: usize,
    },
    VortexInvalid {
        vortex: usize,
        violation: CircularViolation,
    },
    VorticesShareVertex {
        first: usize,
        second: usize,
        vertex: usize,
    },
    /// A global vertex in both the base and vortex `vortex` that is not on its perimeter
    /// (or a perimeter vertex missing from the base).
    AttachmentMismatch {
        vortex: usize,
        vertex: usize,
    },
    DiscFaceNotFacial {
        vortex: usize,
    },
    /// Perimeter vertex not on the disc face.
    PerimeterOffFace {
        vortex: usize,
        vertex: usize,
    },
    /// Perimeter order incompatible with the order around the disc face.
    OrientationMismatch {
        vortex: usize,
    },
    ApexOverlap {
        vertex: usize,
    },
    StrayApexEdge {
        u: usize,
        v: usize,
    },
    VertexUnassigned {
        vertex: usize,
    },
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StructureViolation::*;
        match self {
            Malformed { reason } => write!(f, "malformed structure: {reason}"),
            BaseDisconnected => write!(f, "base graph is disconnected"),
            GenusExceeded { genus, bound } => write!(f, "base has Euler genus {genus} > {bound}"),
            TooManyVortices { count, bound } => write!(f, "{count} vortices > {bound}"),
            WidthExceeded { vortex, width, bound } => {
                write!(f, "vortex {vortex} has width {width} > {bound}")
            }
            TooManyApices { count, bound } => write!(f, "{count} apex vertices > {bound}"),
            VortexInvalid { vortex, violation } => write!(f, "vortex {vortex}: {violation}"),
            VorticesShareVertex { first, second, vertex } => {
                write!(f, "vortices {first} and {second} share vertex {vertex}")
            }
            AttachmentMismatch { vortex, vertex } => {
                write!(f, "vortex {vortex} meets the base at {vertex} off its perimeter")
            }
            DiscFaceNotFacial { vortex } => write!(f, "disc face of vortex {vortex} is not a facial cycle"),
            PerimeterOffFace { vortex, vertex } => {
                write!(f, "perimeter vertex {vertex} of vortex {vortex} is not on its disc face")
            }
            OrientationMismatch { vortex } => {
                write!(f, "perimeter order of vortex {vortex} disagrees with its disc face")
            }
            ApexOverlap { vertex } => write!(f, "apex vertex {vertex} also lies in the base or a vortex"),
            StrayApexEdge { u, v } => write!(f, "extra edge {u}-{v} has no apex endpoint"),
            VertexUnassigned { vertex } => write!(f, "vertex {vertex} is in no part of the structure"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub genus: Option<usize>,
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `sub` appears around `cycle` in the same cyclic order (either direction).
fn cyclic_subsequence(sub: &[usize], cycle: &[usize]) -> bool {
    if sub.len() <= 2 {
        return true;
    }
    let pos: BTreeMap<usize, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let idx: Vec<usize> = sub.iter().map(|v| pos[v]).collect();
    let t = idx.len();
    let descents = |seq: &mut dyn Iterator<Item = (usize, usize)>| seq.filter(|(a, b)| b < a).count();
    let forward = descents(&mut (0..t).map(|i| (idx[i], idx[(i + 1) % t])));
    let backward = descents(&mut (0..t).map(|i| (idx[(i + 1) % t], idx[i])));
    forward == 1 || backward == 1
}

impl AlmostEmbeddable {
    pub fn validate(&self) -> StructureReport {
        validate_almost_embeddable(self)
    }

    /// Validates against parameters other than the declared ones.
    pub fn validate_for(&self, params: Params) -> StructureReport {
        let mut copy = self.clone();
        copy.declared = params;
        validate_almost_embeddable(&copy)
    }

    pub fn flatten(&self) -> SimpleGraph {
        flatten(self)
    }
}

pub fn validate_almost_embeddable(s: &AlmostEmbeddable) -> StructureReport {
    let mut violations = Vec::new();
    let mut malformed = |reason: String| violations.push(StructureViolation::Malformed { reason });
    let n = s.n;
    let base_n = s.base.n();
    if s.labels.len() != n {
        malformed(format!("{} labels for {n} vertices", s.labels.len()));
    }
    if base_n > n {
        malformed(format!("base has {base_n} vertices, structure only {n}"));
    }
    for (i, av) in s.vortices.iter().enumerate() {
        if av.vertex_map.len() != av.vortex.graph.n() {
            malformed(format!("vortex {i}: vertex map covers {} of {}", av.vertex_map.len(), av.vortex.graph.n()));
        }
        let distinct: BTreeSet<_> = av.vertex_map.iter().collect();
        if distinct.len() != av.vertex_map.len() || av.vertex_map.iter().any(|&v| v >= n) {
            malformed(format!("vortex {i}: vertex map is not an injection into 0..{n}"));
        }
        if av.disc_face.iter().any(|&v| v >= base_n) {
            malformed(format!("vortex {i}: disc face leaves the base"));
        }
    }
    if s.apex.iter().any(|&v| v >= n) || s.apex.iter().collect::<BTreeSet<_>>().len() != s.apex.len() {
        malformed("apex list has out-of-range or repeated vertices".into());
    }
    if s.apex_edges.iter().any(|&(u, v)| u >= n || v >= n || u == v) {
        malformed("apex edge out of range or a loop".into());
    }
    if !violations.is_empty() {
        return StructureReport { genus: None, violations };
    }

    let d = s.declared;
    let genus = match s.base.euler_genus() {
        Ok(g) => {
            if g > d.g {
                violations.push(StructureViolation::GenusExceeded { genus: g, bound: d.g });
            }
            Some(g)
        }
        Err(_) => {
            violations.push(StructureViolation::BaseDisconnected);
            None
        }
    };
    if s.vortices.len() > d.p {
        violations.push(StructureViolation::TooManyVortices { count: s.vortices.len(), bound: d.p });
    }
    if s.apex.len() > d.a {
        violations.push(StructureViolation::TooManyApices { count: s.apex.len(), bound: d.a });
    }

    let faces = s.base.trace_faces();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, av) in s.vortices.iter().enumerate() {
        let report = validate_circular(&av.vortex);
        let valid = report.is_valid();
        for violation in report.violations {
            violations.push(StructureViolation::VortexInvalid { vortex: i, violation });
        }
        if valid {
            let width = av.vortex.raw_width();
            if width > d.k {
                violations.push(StructureViolation::WidthExceeded { vortex: i, width, bound: d.k });
            }
        }
        for &v in &av.vertex_map {
            match owner[v] {
                Some(j) => violations.push(StructureViolation::VorticesShareVertex { first: j, second: i, vertex: v }),
                None => owner[v] = Some(i),
            }
        }
        // V(G_i) ∩ V(G_0) = V(Ω_i)
        let perimeter: BTreeSet<usize> = av.global_perimeter().into_iter().collect();
        for &v in &av.vertex_map {
            if (v < base_n) != perimeter.contains(&v) {
                violations.push(StructureViolation::AttachmentMismatch { vortex: i, vertex: v });
            }
        }
        let face_ok = faces.iter().any(|f| f.is_cycle() && f.matches_cycle(&av.disc_face));
        if !face_ok {
            violations.push(StructureViolation::DiscFaceNotFacial { vortex: i });
            continue;
        }
        let on_face: BTreeSet<usize> = av.disc_face.iter().copied().collect();
        let gp = av.global_perimeter();
        let mut off = false;
        for &v in &gp {
            if !on_face.contains(&v) {
                off = true;
                violations.push(StructureViolation::PerimeterOffFace { vortex: i, vertex: v });
            }
        }
        if !off && !cyclic_subsequence(&gp, &av.disc_face) {
            violations.push(StructureViolation::OrientationMismatch { vortex: i });
        }
    }
    let apex: BTreeSet<usize> = s.apex.iter().copied().collect();
    for &v in &apex {
        if v < base_n || owner[v].is_some() {
            violations.push(StructureViolation::ApexOverlap { vertex: v });
        }
    }
    for &(u, v) in &s.apex_edges {
        if !apex.contains(&u) && !apex.contains(&v) {
            violations.push(StructureViolation::StrayApexEdge { u, v });
        }
    }
    for (v, o) in owner.iter().enumerate().skip(base_n) {
        if o.is_none() && !apex.contains(&v) {
            violations.push(StructureViolation::VertexUnassigned { vertex: v });
        }
    }
    StructureReport { genus, violations }
}

/// The union graph on all global vertices; parallel base edges collapse.
pub fn flatten(s: &AlmostEmbeddable) -> SimpleGraph {
    let mut g = SimpleGraph::new(s.n);
    for (v, l) in s.labels.iter().enumerate() {
        g.set_label(v, l.clone());
    }
    for e in s.base.edges() {
        g.add_edge(e.ends[0], e.ends[1]);
    }
    for av in &s.vortices {
        for (u, v) in av.vortex.graph.edges() {
            g.add_edge(av.vertex_map[u], av.vertex_map[v]);
        }
    }
    for &(u, v) in &s.apex_edges {
        g.add_edge(u, v);
    }
    g
}

// ---- wire format ----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VortexJson {
    pub perimeter: Vec<usize>,
    pub bags: BTreeMap<usize, Vec<usize>>,
    pub graph: GraphJson,
}

impl Vortex {
    pub fn to_json(&self) -> VortexJson {
        VortexJson {
            perimeter: self.perimeter.clone(),
            bags: self.perimeter.iter().zip(&self.bags).map(|(&w, b)| (w, b.iter().copied().collect())).collect(),
            graph: self.graph.to_json(),
        }
    }

    /// Bags are keyed by perimeter vertex; a perimeter vertex without an entry
    /// gets an empty bag (which validation then reports).
    pub fn from_json(doc: &VortexJson) -> Result<Self, VortexError> {
        let graph = SimpleGraph::from_json(&doc.graph).map_err(|e| VortexError::Json(e.to_string()))?;
        if let Some(w) = doc.bags.keys().find(|w| !doc.perimeter.contains(w)) {
            return Err(VortexError::Json(format!("bag keyed by non-perimeter vertex {w}")));
        }
        let bags = doc
            .perimeter
            .iter()
            .map(|w| doc.bags.get(w).map(|b| b.iter().copied().collect()).unwrap_or_default())
            .collect();
        Ok(Vortex { graph, perimeter: doc.perimeter.clone(), bags })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct AttachedVortexJson {
    perimeter: Vec<usize>,
    bags: BTreeMap<usize, Vec<usize>>,
    graph: GraphJson,
    vertex_map: Vec<usize>,
    disc_face: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct AlmostEmbeddableJson {
    n: usize,
    declared: Params,
    #[serde(default)]
    labels: BTreeMap<usize, VertexLabel>,
    base: EmbeddingJson,
    vortices: Vec<AttachedVortexJson>,
    #[serde(default)]
    apex: Vec<usize>,
    #[serde(default)]
    apex_edges: Vec<[usize; 2]>,
}

impl Serialize for AlmostEmbeddable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlmostEmbeddableJson {
            n: self.n,
            declared: self.declared,
            labels: self.labels.iter().enumerate().filter_map(|(v, l)| l.clone().map(|l| (v, l))).collect(),
            base: self.base.to_json(),
            vortices: self
                .vortices
                .iter()
                .map(|av| {
                    let VortexJson { perimeter, bags, graph } = av.vortex.to_json();
                    AttachedVortexJson {
                        perimeter,
                        bags,
                        graph,
                        vertex_map: av.vertex_map.clone(),
                        disc_face: av.disc_face.clone(),
                    }
                })
                .collect(),
            apex: self.apex.clone(),
            apex_edges: self.apex_edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlmostEmbeddable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = AlmostEmbeddableJson::deserialize(d)?;
        let base = MultiEmbedding::from_json(&doc.base).map_err(D::Error::custom)?;
        let mut labels = vec![None; doc.n];
        for (v, l) in doc.labels {
            *labels.get_mut(v).ok_or_else(|| D::Error::custom(format!("label for missing vertex {v}")))? = Some(l);
        }
        let mut vortices = Vec::new();
        for av in doc.vortices {
            let vj = VortexJson { perimeter: av.perimeter, bags: av.bags, graph: av.graph };
            vortices.push(AttachedVortex {
                vortex: Vortex::from_json(&vj).map_err(D::Error::custom)?,
                vertex_map: av.vertex_map,
                disc_face: av.disc_face,
            });
        }
        Ok(AlmostEmbeddable {
            n: doc.n,
            labels,
            base,
            vortices,
            apex: doc.apex,
            apex_edges: doc.apex_edges.into_iter().map(|[u, v]| (u, v)).collect(),
            declared: doc.declared,
        })
    }
}
