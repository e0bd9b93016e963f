//! Almost-embeddable graphs with large complete minors, each returned with a
//! certificate model that can be checked independently.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{lower_guarantee, many_vortex_guarantee, one_vortex_guarantee, BoundValue};
use crate::embedding::{
    planar_grid, split_at_faces, triangulation_catalog, triangulation_genus, EmbeddingError, FacialWalk, MultiEmbedding,
};
use crate::graph::{lex_index, lex_product, SimpleGraph, VertexLabel};
use crate::minors::MinorModel;
use crate::vortex::{AlmostEmbeddable, AttachedVortex, Params, Vortex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("vertex {vertex} lies on none of the given faces")]
    FacesDontCoverVertices { vertex: usize },
    #[error("faces {first} and {second} share vertex {vertex}")]
    FacesNotDisjoint { first: usize, second: usize, vertex: usize },
    #[error("face {0} is not a facial cycle of the embedding")]
    NotAFacialCycle(usize),
    #[error("the embedded graph must be simple")]
    NotSimple,
    #[error("k = {k} is too small (need k >= {min})")]
    KTooSmall { k: usize, min: usize },
    #[error("the single-vortex construction needs g >= 1")]
    GZero,
    #[error("p must be at least 1")]
    PZero,
    #[error("genus {g} needs a triangulation of K_{m}, which is not in the catalog")]
    GenusOutOfCatalog { g: usize, m: usize },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// A structure together with a `K_n` model in its flattened graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub n: usize,
    pub guarantee: BoundValue,
    pub structure: AlmostEmbeddable,
    pub model: MinorModel,
}

impl ConstructionCertificate {
    pub fn params(&self) -> Params {
        self.structure.declared
    }
}

/// Output of [`construct_vortex_graph`].
#[derive(Clone, Debug)]
pub struct VortexConstruction {
    pub structure: AlmostEmbeddable,
    /// Model of `lex_product(G, k)` in `flatten(structure)`; branch set `v·k + i - 1` is `D_{v,i}`.
    pub model: MinorModel,
}

/// Replaces every edge by `k²` parallel copies labelled `(i, j)`, where `i`
/// refers to the lower-indexed endpoint. Copies sit where the original edge
/// sat, in label order at the lower endpoint; at the other endpoint the order
/// is reversed for untwisted edges and kept for twisted ones, so the copies
/// bound digon faces and the genus is unchanged. Copy `c` of edge `e` is
/// edge `e·k² + c`.
fn multiply_edges(emb: &MultiEmbedding, k: usize) -> MultiEmbedding {
    let kk = k * k;
    let rotation = (0..emb.n())
        .map(|v| {
            let mut rot = Vec::with_capacity(emb.degree(v) * kk);
            for &h in emb.rotation(v) {
                let e = h / 2;
                let edge = emb.edge(e);
                let lower = edge.ends[0].min(edge.ends[1]) == v;
                let copies: Vec<usize> = (0..kk).map(|c| 2 * (e * kk + c) + h % 2).collect();
                if lower || edge.signature < 0 {
                    rot.extend(copies);
                } else {
                    rot.extend(copies.into_iter().rev());
                }
            }
            rot
        })
        .collect();
    let mut signatures = Vec::with_capacity(emb.edge_count() * kk);
    let mut labels = Vec::with_capacity(emb.edge_count() * kk);
    for edge in emb.edges() {
        for c in 0..kk {
            signatures.push(edge.signature);
            labels.push(Some((c / k + 1, c % k + 1)));
        }
    }
    MultiEmbedding::new(rotation, signatures, labels).expect("parallel copies form a valid rotation system")
}

fn check_faces(emb: &MultiEmbedding, faces: &[Vec<usize>]) -> Result<(), ConstructionError> {
    let mut face_of = vec![None; emb.n()];
    for (i, f) in faces.iter().enumerate() {
        if f.len() < 3 || !emb.is_facial_cycle(f) {
            return Err(ConstructionError::NotAFacialCycle(i));
        }
        for &v in f {
            if let Some(first) = face_of[v] {
                return Err(ConstructionError::FacesNotDisjoint { first, second: i, vertex: v });
            }
            face_of[v] = Some(i);
        }
    }
    match face_of.iter().position(Option::is_none) {
        Some(vertex) => Err(ConstructionError::FacesDontCoverVertices { vertex }),
        None => Ok(()),
    }
}

/// Embeds the `k`-fold lexicographic product of an embedded simple graph as a
/// minor of a graph with one vortex per face.
///
/// Every edge is multiplied into `k²` labelled copies, the result is split at
/// the given faces, and each split face receives a vortex whose hubs `(v, i)`
/// see every path vertex belonging to `v`. A copy labelled `(i, j)` between
/// `v < w` puts its end at `v` into the branch set of `(v, i)` and its end at
/// `w` into that of `(w, j)`; each branch set is a star around its hub.
pub fn construct_vortex_graph(
    emb: &MultiEmbedding,
    faces: &[Vec<usize>],
    k: usize,
) -> Result<VortexConstruction, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::KTooSmall { k, min: 1 });
    }
    if !emb.is_simple() {
        return Err(ConstructionError::NotSimple);
    }
    check_faces(emb, faces)?;
    let genus = emb.euler_genus()?;
    let n = emb.n();

    let multi = multiply_edges(emb, k);
    let walks: Vec<FacialWalk> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| multi.find_facial_cycle(f).ok_or(ConstructionError::NotAFacialCycle(i)))
        .collect::<Result<_, _>>()?;
    let split = split_at_faces(&multi, &walks)?;
    let base_n = split.embedding.n();

    // hubs, face by face in cycle order
    let mut hub_base = vec![0; n];
    let mut total = base_n;
    for f in faces {
        for &v in f {
            hub_base[v] = total;
            total += k;
        }
    }
    let hub = |v: usize, i: usize| hub_base[v] + i - 1;

    let mut labels: Vec<Option<VertexLabel>> =
        (0..base_n).map(|x| Some(VertexLabel::Split(split.owner[x], split.position[x]))).collect();
    labels.resize(total, None);
    for v in 0..n {
        for i in 1..=k {
            labels[hub(v, i)] = Some(VertexLabel::Pair(v, i));
        }
    }

    let mut vortices = Vec::with_capacity(faces.len());
    for (f, walk) in faces.iter().zip(&split.faces) {
        let perimeter_global = walk.vertices().to_vec();
        let t = perimeter_global.len();
        let local_hub = |slot: usize, i: usize| t + slot * k + i - 1;
        let slot_of = |v: usize| f.iter().position(|&w| w == v).expect("owner lies on the face");
        let mut graph = SimpleGraph::new(t + f.len() * k);
        let mut bags = Vec::with_capacity(t);
        for (a, &x) in perimeter_global.iter().enumerate() {
            let slot = slot_of(split.owner[x]);
            let mut bag = BTreeSet::from([a]);
            for i in 1..=k {
                graph.add_edge(a, local_hub(slot, i));
                bag.insert(local_hub(slot, i));
            }
            bags.push(bag);
        }
        for slot in 0..f.len() {
            for i in 1..=k {
                for j in i + 1..=k {
                    graph.add_edge(local_hub(slot, i), local_hub(slot, j));
                }
            }
        }
        let mut vertex_map = perimeter_global.clone();
        for &v in f {
            vertex_map.extend((1..=k).map(|i| hub(v, i)));
        }
        for (local, &global) in vertex_map.iter().enumerate() {
            graph.set_label(local, labels[global].clone());
        }
        let vortex = Vortex { graph, perimeter: (0..t).collect(), bags };
        vortices.push(AttachedVortex { vortex, vertex_map, disc_face: perimeter_global });
    }

    let mut sets: Vec<BTreeSet<usize>> = (0..n * k).map(|idx| BTreeSet::from([hub(idx / k, idx % k + 1)])).collect();
    for edge in split.embedding.edges() {
        let Some((i, j)) = edge.label else { continue };
        let owners = edge.ends.map(|x| split.owner[x]);
        let lo = usize::from(owners[1] < owners[0]);
        sets[lex_index(owners[lo], i, k)].insert(edge.ends[lo]);
        sets[lex_index(owners[1 - lo], j, k)].insert(edge.ends[1 - lo]);
    }
    let pattern = lex_product(&emb.to_simple_graph(), k).strip_labels();
    let model = MinorModel { pattern, sets, multiplicity: 1 };

    let structure = AlmostEmbeddable {
        n: total,
        labels,
        base: split.embedding,
        vortices,
        apex: Vec::new(),
        apex_edges: Vec::new(),
        declared: Params { g: genus, p: faces.len(), k, a: 0 },
    };
    Ok(VortexConstruction { structure, model })
}

/// `K_{nk}` model in `lex_product(grid_graph(n), 2k)`: branch set `(x, z)` at
/// index `(x-1)k + z - 1` is `{(x,y,2z-1), (y,x,2z) : y ∈ [1,n]}`.
pub fn grid_model(n: usize, k: usize) -> MinorModel {
    assert!(n >= 1 && k >= 1, "grid model needs n, k >= 1");
    let vertex = |x: usize, y: usize, z: usize| lex_index((x - 1) * n + (y - 1), z, 2 * k);
    let mut sets = Vec::with_capacity(n * k);
    for x in 1..=n {
        for z in 1..=k {
            sets.push((1..=n).flat_map(|y| [vertex(x, y, 2 * z - 1), vertex(y, x, 2 * z)]).collect());
        }
    }
    MinorModel::clique(sets, 1)
}

/// Smallest `m` with `√(6g) + 1 ≤ m ≤ √(6g) + 3` and `m mod 6 ∈ {0, 1, 3, 4}`.
pub fn one_vortex_order(g: usize) -> usize {
    let six_g = 6 * g;
    let mut m = 1;
    while (m - 1) * (m - 1) < six_g {
        m += 1;
    }
    while ![0, 1, 3, 4].contains(&(m % 6)) {
        m += 1;
    }
    m
}

/// `K_{(m-1)k}` as a minor of a single-vortex graph over `K_{m-1}`, embedded
/// as a triangulation of `K_m` minus one vertex.
pub fn one_vortex(g: usize, k: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if g == 0 {
        return Err(ConstructionError::GZero);
    }
    if k == 0 {
        return Err(ConstructionError::KTooSmall { k, min: 1 });
    }
    let m = one_vortex_order(g);
    debug_assert!(triangulation_genus(m) <= g);
    let tri = match triangulation_catalog(m) {
        Ok(t) => t,
        Err(EmbeddingError::NotInCatalog(_)) => return Err(ConstructionError::GenusOutOfCatalog { g, m }),
        Err(e) => return Err(e.into()),
    };
    let punctured = tri.delete_vertex(m - 1)?;
    let face = punctured
        .trace_faces()
        .into_iter()
        .find(|f| f.is_cycle() && f.len() == m - 1)
        .expect("removing a vertex of a triangulation leaves a Hamiltonian face");
    let built = construct_vortex_graph(&punctured, &[face.vertices().to_vec()], k)?;
    let mut structure = built.structure;
    structure.declared = Params { g, p: 1, k, a: 0 };
    // K_{m-1}[k] is complete
    let model = MinorModel::clique(built.model.sets, 1);
    Ok(ConstructionCertificate { n: (m - 1) * k, guarantee: one_vortex_guarantee(g, k), structure, model })
}

/// `K_{2mℓ}` with `m = ⌊√p⌋`, `ℓ = ⌊k/2⌋`, from the grid `L_{2m}` with one
/// vortex in each of the `m²` disjoint squares.
pub fn many_vortex(p: usize, k: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if p == 0 {
        return Err(ConstructionError::PZero);
    }
    if k < 2 {
        return Err(ConstructionError::KTooSmall { k, min: 2 });
    }
    let m = (1..).take_while(|m| m * m <= p).last().expect("p >= 1");
    let l = k / 2;
    let side = 2 * m;
    let idx = |x: usize, y: usize| (x - 1) * side + (y - 1);
    let mut faces = Vec::with_capacity(m * m);
    for x in 1..=m {
        for y in 1..=m {
            faces.push(vec![
                idx(2 * x - 1, 2 * y - 1),
                idx(2 * x, 2 * y - 1),
                idx(2 * x, 2 * y),
                idx(2 * x - 1, 2 * y),
            ]);
        }
    }
    let built = construct_vortex_graph(&planar_grid(side), &faces, 2 * l)?;
    let model =
        grid_model(side, l).compose(&built.model).expect("grid model lives in the product the vortex model realises");
    let mut structure = built.structure;
    structure.declared = Params { g: 0, p, k, a: 0 };
    Ok(ConstructionCertificate { n: side * l, guarantee: many_vortex_guarantee(p, k), structure, model })
}

/// The single-vortex construction when `g ≥ p`, otherwise the grid one.
pub fn combined(g: usize, p: usize, k: usize) -> Result<ConstructionCertificate, ConstructionError> {
    if p == 0 {
        return Err(ConstructionError::PZero);
    }
    if k < 2 {
        return Err(ConstructionError::KTooSmall { k, min: 2 });
    }
    let mut cert = if g >= p && g >= 1 { one_vortex(g, k)? } else { many_vortex(p, k)? };
    cert.structure.declared = Params { g, p, k, a: 0 };
    cert.guarantee = lower_guarantee(g, p, k, 0);
    Ok(cert)
}

/// [`combined`] plus `a` apex vertices adjacent to everything; each apex is
/// its own branch set.
pub fn with_apex(g: usize, p: usize, k: usize, a: usize) -> Result<ConstructionCertificate, ConstructionError> {
    let mut cert = combined(g, p, k)?;
    let s = &mut cert.structure;
    let old = s.n;
    for j in 0..a {
        let x = old + j;
        s.labels.push(Some(VertexLabel::Plain(j)));
        s.apex.push(x);
        s.apex_edges.extend((0..x).map(|w| (w, x)));
        cert.model.sets.push(BTreeSet::from([x]));
    }
    s.n = old + a;
    s.declared.a = a;
    cert.model = MinorModel::clique(cert.model.sets, 1);
    cert.n += a;
    cert.guarantee = lower_guarantee(g, p, k, a);
    Ok(cert)
}
