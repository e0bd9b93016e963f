//! Splitting vertices of an embedded multigraph at pairwise disjoint faces.
//!
//! A face vertex `v` of degree `d > 3` whose face corner lies between the
//! consecutive edge-ends `e_d, e_1` (clockwise `e_1, ..., e_d`) is replaced by
//! a path `x_1, ..., x_d`; `x_i` takes over `e_i` and has rotation
//! `(e_i, x_{i+1}, x_{i-1})`. The corner between `e_i` and `e_{i+1}` becomes the
//! corner `x_i -> x_{i+1}`, and the face itself runs along the whole path, so
//! faces correspond one to one and the Euler genus is unchanged.

use super::{twin, Dart, EmbeddedEdge, EmbeddingError, FacialWalk, MultiEmbedding};

#[derive(Clone, Debug)]
pub struct Splitting {
    pub embedding: MultiEmbedding,
    /// Original vertex each output vertex belongs to.
    pub owner: Vec<usize>,
    /// `i` for path vertex `x_i`; 0 for vertices that were not split.
    pub position: Vec<usize>,
    /// The walk in the output corresponding to each input face.
    pub faces: Vec<FacialWalk>,
}

struct Corner {
    /// Clockwise `e_1 .. e_d`.
    ends: Vec<usize>,
    first: usize,
}

pub fn split_at_faces(emb: &MultiEmbedding, faces: &[FacialWalk]) -> Result<Splitting, EmbeddingError> {
    let n = emb.n();
    let mut on_face = vec![usize::MAX; n];
    for (i, f) in faces.iter().enumerate() {
        if !emb.is_face(f) {
            return Err(EmbeddingError::NotAFace(i));
        }
        if !f.is_cycle() {
            let mut vs = f.vertices().to_vec();
            vs.sort_unstable();
            let v = vs.windows(2).find(|w| w[0] == w[1]).map_or(vs[0], |w| w[0]);
            return Err(EmbeddingError::NotACycle(i, v));
        }
        for &v in f.vertices() {
            if on_face[v] != usize::MAX {
                return Err(EmbeddingError::FacesNotDisjoint(on_face[v], i, v));
            }
            on_face[v] = i;
        }
    }

    // face corner of every vertex to be split
    let mut corners: Vec<Option<Corner>> = (0..n).map(|_| None).collect();
    for f in faces {
        let len = f.darts.len();
        for (i, d) in f.darts.iter().enumerate() {
            let v = emb.end_vertex(d.end);
            let deg = emb.degree(v);
            if deg <= 3 {
                continue;
            }
            let arrive = twin(f.darts[(i + len - 1) % len].end);
            let first = if d.sign > 0 { d.end } else { arrive };
            let rot = emb.rotation(v);
            let start = emb.pos[first];
            let ends = (0..deg).map(|j| rot[(start + j) % deg]).collect();
            corners[v] = Some(Corner { ends, first });
        }
    }

    // new vertex numbering: original order, split vertices expand in place
    let mut base = vec![0; n];
    let mut owner = Vec::new();
    let mut position = Vec::new();
    for v in 0..n {
        base[v] = owner.len();
        match &corners[v] {
            Some(c) => {
                for i in 1..=c.ends.len() {
                    owner.push(v);
                    position.push(i);
                }
            }
            None => {
                owner.push(v);
                position.push(0);
            }
        }
    }

    let mut edges: Vec<EmbeddedEdge> = emb.edges().to_vec();
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); owner.len()];
    // edge-end of the path edge leaving x_i towards x_{i+1} (or x_{i-1})
    let mut path_up: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut path_down: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        match &corners[v] {
            None => {
                rotation[base[v]] = emb.rotation(v).to_vec();
            }
            Some(c) => {
                let d = c.ends.len();
                let mut up = vec![usize::MAX; d];
                let mut down = vec![usize::MAX; d];
                for i in 0..d - 1 {
                    let e = edges.len();
                    edges.push(EmbeddedEdge { ends: [base[v] + i, base[v] + i + 1], signature: 1, label: None });
                    up[i] = 2 * e;
                    down[i + 1] = 2 * e + 1;
                }
                for i in 0..d {
                    let rot = &mut rotation[base[v] + i];
                    rot.push(c.ends[i]);
                    if i + 1 < d {
                        rot.push(up[i]);
                    }
                    if i > 0 {
                        rot.push(down[i]);
                    }
                }
                path_up[v] = up;
                path_down[v] = down;
            }
        }
    }
    for (e, edge) in emb.edges().iter().enumerate() {
        for s in 0..2 {
            let v = edge.ends[s];
            edges[e].ends[s] = match &corners[v] {
                None => base[v],
                Some(c) => base[v] + c.ends.iter().position(|&h| h == 2 * e + s).unwrap(),
            };
        }
    }
    let mut signatures = Vec::with_capacity(edges.len());
    let mut labels = Vec::with_capacity(edges.len());
    for e in &edges {
        signatures.push(e.signature);
        labels.push(e.label);
    }
    let out = MultiEmbedding::new(rotation, signatures, labels)?;

    let mut new_faces = Vec::with_capacity(faces.len());
    for f in faces {
        let mut darts = Vec::new();
        for d in &f.darts {
            let v = emb.end_vertex(d.end);
            match &corners[v] {
                None => darts.push(*d),
                Some(c) => {
                    let last = c.ends.len() - 1;
                    if d.end == c.first {
                        // entered through e_d: walk x_d, ..., x_1
                        debug_assert!(d.sign > 0);
                        for i in (1..=last).rev() {
                            darts.push(Dart { end: path_down[v][i], sign: d.sign });
                        }
                    } else {
                        // entered through e_1: walk x_1, ..., x_d
                        darts.extend(path_up[v][..last].iter().map(|&end| Dart { end, sign: d.sign }));
                    }
                    darts.push(*d);
                }
            }
        }
        new_faces.push(FacialWalk::from_darts(&out, darts));
    }

    Ok(Splitting { embedding: out, owner, position, faces: new_faces })
}
