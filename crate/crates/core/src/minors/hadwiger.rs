//! Exact Hadwiger number for small graphs.
//!
//! In a connected graph any clique-minor model can be grown until it covers
//! every vertex, so `η(G)` is the largest number of parts in a partition of
//! `V(G)` into connected, pairwise adjacent sets. The search enumerates such
//! partitions part by part (each new part contains the lowest unassigned
//! vertex) with branch-and-bound on the number of parts still achievable.

use std::collections::BTreeSet;

use thiserror::Error;

use super::MinorModel;
use crate::graph::SimpleGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vertices: usize,
    /// Search-node limit.
    pub node_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vertices: 12, node_budget: 50_000_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
}

#[derive(Clone, Debug)]
pub struct HadwigerResult {
    pub eta: usize,
    /// A `K_eta` model witnessing the value.
    pub model: MinorModel,
    pub nodes: u64,
}

pub fn hadwiger_oracle(g: &SimpleGraph, cfg: &OracleConfig) -> Result<HadwigerResult, OracleError> {
    let n = g.n();
    if n > cfg.max_vertices.min(64) {
        return Err(OracleError::TooLarge { n, cap: cfg.max_vertices.min(64) });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).fold(0, |m, w| m | 1 << w)).collect();
    let mut search = Search { adj: &adj, budget: cfg.node_budget, nodes: 0, best: Vec::new() };
    for comp in g.components() {
        let mask = comp.iter().fold(0u64, |m, &v| m | 1 << v);
        search.run(mask)?;
    }
    let sets: Vec<BTreeSet<usize>> = search.best.iter().map(|&m| bits(m).collect()).collect();
    Ok(HadwigerResult { eta: sets.len(), model: MinorModel::clique(sets, 1), nodes: search.nodes })
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Largest `t` with `t(t-1)/2 <= e`.
fn edge_cap(e: usize) -> usize {
    let mut t = ((2.0 * e as f64).sqrt() as usize).saturating_sub(1);
    while (t + 1) * t / 2 <= e {
        t += 1;
    }
    t
}

struct Search<'a> {
    adj: &'a [u64],
    budget: u64,
    nodes: u64,
    best: Vec<u64>,
}

impl Search<'_> {
    fn nbhd(&self, set: u64) -> u64 {
        bits(set).fold(0, |m, v| m | self.adj[v])
    }

    fn inner_edges(&self, set: u64) -> usize {
        bits(set).map(|v| (self.adj[v] & set).count_ones() as usize).sum::<usize>() / 2
    }

    fn run(&mut self, component: u64) -> Result<(), OracleError> {
        let edges = self.inner_edges(component);
        let mut parts = Vec::new();
        self.extend(&mut parts, component, edges)
    }

    /// `free_edges` counts edges not inside any chosen part.
    fn extend(&mut self, parts: &mut Vec<u64>, rest: u64, free_edges: usize) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::BudgetExceeded(self.budget));
        }
        if rest == 0 {
            if parts.len() > self.best.len() {
                self.best = parts.clone();
            }
            return Ok(());
        }
        let bound = (parts.len() + rest.count_ones() as usize).min(edge_cap(free_edges));
        if bound <= self.best.len() {
            return Ok(());
        }
        let root = rest.trailing_zeros() as usize;
        let mut candidates = Vec::new();
        self.connected_sets(1 << root, 0, rest, &mut candidates);
        candidates.sort_by_key(|s| (s.count_ones(), *s));
        for s in candidates {
            let ns = self.nbhd(s);
            if parts.iter().any(|&p| p & ns == 0) {
                continue;
            }
            let left = rest & !s;
            // every part needs a neighbour among the vertices still to be placed
            if left != 0 && (parts.iter().any(|&p| self.nbhd(p) & left == 0) || ns & left == 0) {
                continue;
            }
            let used = self.inner_edges(s);
            parts.push(s);
            let r = self.extend(parts, left, free_edges - used);
            parts.pop();
            r?;
            let bound = (parts.len() + rest.count_ones() as usize).min(edge_cap(free_edges));
            if bound <= self.best.len() {
                break;
            }
        }
        Ok(())
    }

    /// All connected subsets of `allowed` that contain `set`, avoid `excluded`,
    /// and are reachable by growing `set`; each is produced once.
    fn connected_sets(&self, set: u64, excluded: u64, allowed: u64, out: &mut Vec<u64>) {
        out.push(set);
        let cand = self.nbhd(set) & allowed & !set & !excluded;
        let mut blocked = excluded;
        for v in bits(cand) {
            self.connected_sets(set | 1 << v, blocked, allowed, out);
            blocked |= 1 << v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, grid_graph, petersen_graph};
    use crate::minors::verify_model;

    fn eta(g: &SimpleGraph) -> usize {
        let r = hadwiger_oracle(g, &OracleConfig::default()).unwrap();
        assert!(verify_model(g, &r.model).is_valid());
        r.eta
    }

    #[test]
    fn small_values() {
        assert_eq!(eta(&SimpleGraph::new(0)), 0);
        assert_eq!(eta(&SimpleGraph::new(3)), 1);
        assert_eq!(eta(&complete_graph(5)), 5);
        assert_eq!(eta(&cycle_graph(5)), 3);
        assert_eq!(eta(&grid_graph(3)), 4);
        // 15 edges cannot give K6 branch sets both connectivity and all 15 adjacencies
        assert_eq!(eta(&petersen_graph()), 5);
        assert_eq!(eta(&complete_graph(12)), 12);
        let path = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(eta(&path), 2);
    }

    #[test]
    fn connected_set_enumeration_is_exact() {
        let g = grid_graph(3);
        let adj: Vec<u64> = (0..9).map(|v| g.neighbors(v).fold(0, |m, w| m | 1 << w)).collect();
        let s = Search { adj: &adj, budget: 0, nodes: 0, best: vec![] };
        let mut out = Vec::new();
        s.connected_sets(1, 0, (1 << 9) - 1, &mut out);
        let mut sorted = out.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), out.len());
        let brute = (1u64..1 << 9).filter(|&m| m & 1 == 1 && g.is_connected_subset(&bits(m).collect())).count();
        assert_eq!(out.len(), brute);
    }

    #[test]
    fn limits() {
        let big = cycle_graph(20);
        assert_eq!(
            hadwiger_oracle(&big, &OracleConfig::default()).unwrap_err(),
            OracleError::TooLarge { n: 20, cap: 12 }
        );
        let cfg = OracleConfig { max_vertices: 12, node_budget: 3 };
        assert_eq!(hadwiger_oracle(&petersen_graph(), &cfg).unwrap_err(), OracleError::BudgetExceeded(3));
    }

    #[test]
    fn edge_cap_values() {
        assert_eq!(edge_cap(0), 1);
        assert_eq!(edge_cap(1), 2);
        assert_eq!(edge_cap(15), 6);
        assert_eq!(edge_cap(14), 5);
        assert_eq!(edge_cap(66), 12);
    }
}
