use super::{end_edge, twin, EmbeddingError, MultiEmbedding};

/// One step of a facial walk: leave the current vertex through edge-end `end`
/// while the local orientation is `sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub end: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacialWalk {
    pub darts: Vec<Dart>,
    vertices: Vec<usize>,
}

impl FacialWalk {
    pub(crate) fn from_darts(emb: &MultiEmbedding, darts: Vec<Dart>) -> Self {
        let vertices = darts.iter().map(|d| emb.end_vertex(d.end)).collect();
        FacialWalk { darts, vertices }
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Vertex at each step, in walk order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.darts.iter().map(|d| end_edge(d.end))
    }

    /// `(vertex, edge)` incidences in walk order.
    pub fn incidences(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.iter().copied().zip(self.edges())
    }

    /// No repeated vertex and no edge traversed twice.
    pub fn is_cycle(&self) -> bool {
        let mut seen = self.vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        let mut edges: Vec<usize> = self.edges().collect();
        edges.sort_unstable();
        edges.dedup();
        seen.len() == self.vertices.len() && edges.len() == self.darts.len()
    }

    /// Whether the vertex sequence equals `cycle` up to rotation and reflection.
    pub fn matches_cycle(&self, cycle: &[usize]) -> bool {
        same_cyclic_sequence(&self.vertices, cycle)
    }
}

/// Equality of cyclic sequences up to rotation and reflection.
pub(crate) fn same_cyclic_sequence(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    let rev: Vec<usize> = b.iter().rev().copied().collect();
    (0..n).any(|s| (0..n).all(|i| a[(s + i) % n] == b[i]) || (0..n).all(|i| a[(s + i) % n] == rev[i]))
}

fn state_index(d: Dart) -> usize {
    2 * d.end + usize::from(d.sign < 0)
}

impl MultiEmbedding {
    /// The dart that follows `d` along its face.
    pub fn step(&self, d: Dart) -> Dart {
        let e = end_edge(d.end);
        let arrive = twin(d.end);
        let sign = d.sign * self.edges[e].signature;
        let end = if sign > 0 { self.succ(arrive) } else { self.pred(arrive) };
        Dart { end, sign }
    }

    /// The same edge-side traversed in the opposite direction.
    fn reverse(&self, d: Dart) -> Dart {
        Dart { end: twin(d.end), sign: -d.sign * self.edges[end_edge(d.end)].signature }
    }

    /// All facial walks, each traced once. Walks are discovered from the lowest
    /// unused edge-end (positive orientation first), so the order is deterministic.
    pub fn trace_faces(&self) -> Vec<FacialWalk> {
        let mut used = vec![false; 4 * self.edges.len()];
        let mut faces = Vec::new();
        for end in 0..2 * self.edges.len() {
            for sign in [1i8, -1] {
                let start = Dart { end, sign };
                if used[state_index(start)] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut cur = start;
                loop {
                    used[state_index(cur)] = true;
                    used[state_index(self.reverse(cur))] = true;
                    darts.push(cur);
                    cur = self.step(cur);
                    if cur == start {
                        break;
                    }
                }
                faces.push(FacialWalk::from_darts(self, darts));
            }
        }
        faces
    }

    pub fn face_count(&self) -> usize {
        if self.edges.is_empty() {
            return usize::from(self.n() > 0);
        }
        self.trace_faces().len()
    }

    /// Euler genus `2 - n + m - f` of the surface this rotation system describes.
    pub fn euler_genus(&self) -> Result<usize, EmbeddingError> {
        if !self.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        if self.n() == 0 {
            return Ok(0);
        }
        let chi = self.n() as i64 - self.edges.len() as i64 + self.face_count() as i64;
        let g = 2 - chi;
        assert!(g >= 0, "traced embedding has negative Euler genus");
        Ok(g as usize)
    }

    pub fn is_facial_cycle(&self, cycle: &[usize]) -> bool {
        self.find_facial_cycle(cycle).is_some()
    }

    /// First traced face whose vertex sequence is the cycle `cycle`
    /// (up to rotation and reflection).
    pub fn find_facial_cycle(&self, cycle: &[usize]) -> Option<FacialWalk> {
        let mut sorted = cycle.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != cycle.len() || sorted.last().is_some_and(|&v| v >= self.n()) {
            return None;
        }
        self.trace_faces().into_iter().find(|f| f.matches_cycle(cycle))
    }

    /// Whether `walk` is a closed orbit of the face-tracing step.
    pub fn is_face(&self, walk: &FacialWalk) -> bool {
        let d = &walk.darts;
        !d.is_empty()
            && d.iter().all(|x| x.end < 2 * self.edges.len() && (x.sign == 1 || x.sign == -1))
            && (0..d.len()).all(|i| self.step(d[i]) == d[(i + 1) % d.len()])
    }
}

#[cfg(test)]
mod tests {
    use super::super::{planar_cycle, planar_grid, triangulation_catalog};
    use super::*;

    fn handshake(e: &MultiEmbedding) {
        let total: usize = e.trace_faces().iter().map(FacialWalk::len).sum();
        assert_eq!(total, 2 * e.edge_count());
    }

    #[test]
    fn triangle_has_two_faces() {
        let k3 = planar_cycle(3);
        let faces = k3.trace_faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
        assert_eq!(k3.euler_genus(), Ok(0));
        assert!(k3.is_facial_cycle(&[0, 1, 2]));
        assert!(k3.is_facial_cycle(&[2, 1, 0]));
        assert!(!k3.is_facial_cycle(&[0, 1]));
        handshake(&k3);
    }

    #[test]
    fn tetrahedron_faces() {
        let k4 = triangulation_catalog(4).unwrap();
        let faces = k4.trace_faces();
        assert_eq!(faces.len(), 4);
        assert_eq!(k4.euler_genus(), Ok(0));
        for s in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            assert!(k4.is_facial_cycle(&s));
        }
        handshake(&k4);
    }

    #[test]
    fn square_grid_faces() {
        let l2 = planar_grid(2);
        assert_eq!(l2.trace_faces().len(), 2);
        // (1,1),(2,1),(2,2),(1,2)
        assert!(l2.is_facial_cycle(&[0, 2, 3, 1]));
        assert!(!l2.is_facial_cycle(&[0, 3, 2, 1]));
        let l4 = planar_grid(4);
        assert_eq!(l4.euler_genus(), Ok(0));
        assert_eq!(l4.face_count(), 10);
        handshake(&l4);
    }

    #[test]
    fn single_vertex_and_edge() {
        let p = MultiEmbedding::new(vec![vec![]], vec![], vec![]).unwrap();
        assert_eq!(p.euler_genus(), Ok(0));
        let k2 = MultiEmbedding::from_neighbor_rotation(&[vec![1], vec![0]]).unwrap();
        assert_eq!(k2.face_count(), 1);
        assert_eq!(k2.euler_genus(), Ok(0));
        let two = MultiEmbedding::new(vec![vec![], vec![]], vec![], vec![]).unwrap();
        assert_eq!(two.euler_genus(), Err(EmbeddingError::Disconnected));
    }

    #[test]
    fn twisted_digon_is_projective() {
        // two parallel edges, one twisted: a single face of length 4, genus 1
        let e = MultiEmbedding::new(vec![vec![0, 2], vec![1, 3]], vec![1, -1], vec![None, None]).unwrap();
        assert_eq!(e.face_count(), 1);
        assert_eq!(e.euler_genus(), Ok(1));
        handshake(&e);
    }

    #[test]
    fn traced_walks_are_faces() {
        for m in [3, 4, 6, 7] {
            let e = triangulation_catalog(m).unwrap();
            for f in e.trace_faces() {
                assert!(e.is_face(&f));
            }
        }
        let k3 = planar_cycle(3);
        let mut w = k3.trace_faces()[0].clone();
        w.darts.swap(0, 1);
        assert!(!k3.is_face(&w));
    }

    #[test]
    fn cyclic_sequence_equality() {
        assert!(same_cyclic_sequence(&[1, 2, 3, 4], &[3, 4, 1, 2]));
        assert!(same_cyclic_sequence(&[1, 2, 3, 4], &[2, 1, 4, 3]));
        assert!(!same_cyclic_sequence(&[1, 2, 3, 4], &[1, 3, 2, 4]));
        assert!(same_cyclic_sequence(&[], &[]));
    }
}
