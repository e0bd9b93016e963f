//! Rotation systems of complete-graph triangulations, shipped as data files and
//! checked on load.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::{EmbeddingError, EmbeddingJson, MultiEmbedding};

const K3: &str = include_str!("../../catalog/k3.json");
const K4: &str = include_str!("../../catalog/k4.json");
const K6: &str = include_str!("../../catalog/k6.json");
const K7: &str = include_str!("../../catalog/k7.json");

const FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
struct CatalogFile {
    version: u32,
    m: usize,
    rotations: BTreeMap<usize, Vec<usize>>,
    signatures: BTreeMap<usize, i8>,
    #[serde(default)]
    edge_labels: BTreeMap<usize, [usize; 2]>,
}

pub fn catalog_members() -> &'static [usize] {
    &[3, 4, 6, 7]
}

/// Euler genus of a triangulation by `K_m`: `(m-3)(m-4)/6`.
pub fn triangulation_genus(m: usize) -> usize {
    if m < 4 {
        0
    } else {
        (m - 3) * (m - 4) / 6
    }
}

/// A triangular embedding of `K_m` in the surface of Euler genus `(m-3)(m-4)/6`.
pub fn triangulation_catalog(m: usize) -> Result<MultiEmbedding, EmbeddingError> {
    let text = match m {
        3 => K3,
        4 => K4,
        6 => K6,
        7 => K7,
        _ => return Err(EmbeddingError::NotInCatalog(m)),
    };
    let corrupt = |reason: String| EmbeddingError::CatalogCorrupt { m, reason };
    let file: CatalogFile = serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
    if file.version != FORMAT_VERSION || file.m != m {
        return Err(corrupt(format!("header says version {} for K_{}", file.version, file.m)));
    }
    let doc = EmbeddingJson { rotations: file.rotations, signatures: file.signatures, edge_labels: file.edge_labels };
    let emb = MultiEmbedding::from_json(&doc).map_err(|e| corrupt(e.to_string()))?;
    let g = emb.to_simple_graph();
    if g.n() != m || !g.is_complete() || !emb.is_simple() {
        return Err(corrupt("underlying graph is not K_m".into()));
    }
    let faces = emb.trace_faces();
    if faces.iter().any(|f| f.len() != 3) {
        return Err(corrupt("a face is not a triangle".into()));
    }
    let genus = emb.euler_genus().map_err(|e| corrupt(e.to_string()))?;
    if genus != triangulation_genus(m) {
        return Err(corrupt(format!("Euler genus {genus}, expected {}", triangulation_genus(m))));
    }
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_validate() {
        for (m, genus, faces) in [(3, 0, 2), (4, 0, 4), (6, 1, 10), (7, 2, 14)] {
            let e = triangulation_catalog(m).unwrap();
            assert_eq!(e.euler_genus(), Ok(genus), "K_{m}");
            assert_eq!(e.face_count(), faces, "K_{m}");
            // m_edges = 3n + 3g - 6 for triangulations (m >= 3)
            assert_eq!(e.edge_count() + 6, 3 * m + 3 * genus);
        }
        assert!(!triangulation_catalog(6).unwrap().is_orientable_signed());
        assert!(triangulation_catalog(7).unwrap().is_orientable_signed());
    }

    #[test]
    fn gaps_are_rejected() {
        for m in [0, 1, 2, 5, 8, 9, 10, 11, 12, 13] {
            assert_eq!(triangulation_catalog(m), Err(EmbeddingError::NotInCatalog(m)));
        }
    }

    #[test]
    fn genus_formula() {
        assert_eq!(triangulation_genus(3), 0);
        assert_eq!(triangulation_genus(4), 0);
        assert_eq!(triangulation_genus(6), 1);
        assert_eq!(triangulation_genus(7), 2);
        assert_eq!(triangulation_genus(9), 5);
    }

    #[test]
    fn vertex_deletion_leaves_hamiltonian_face() {
        for m in [4, 6, 7] {
            let e = triangulation_catalog(m).unwrap();
            for v in 0..m {
                let d = e.delete_vertex(v).unwrap();
                assert_eq!(d.euler_genus(), Ok(triangulation_genus(m)));
                let faces = d.trace_faces();
                assert!(faces.iter().any(|f| f.len() == m - 1 && f.is_cycle()), "K_{m} minus {v}");
            }
        }
    }
}
