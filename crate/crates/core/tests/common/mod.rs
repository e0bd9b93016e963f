//! Independent reference implementations and seeded corpora shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hadwiger_core::graph::SimpleGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, q)` with `q = num/den`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, num: u32, den: u32) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_ratio(num, den) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Graphs on `1..=max_n` vertices with densities spread over `[0.2, 0.8]`.
pub fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<SimpleGraph> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_n);
            let num = r.gen_range(2..=8);
            random_graph(&mut r, n, num, 10)
        })
        .collect()
}

/// Hadwiger number by enumerating every partition of every vertex subset
/// (restricted-growth strings with an extra "unused" symbol).
pub fn naive_eta(g: &SimpleGraph) -> usize {
    fn rec(g: &SimpleGraph, v: usize, assign: &mut Vec<Option<usize>>, parts: usize, best: &mut usize) {
        if v == g.n() {
            if parts > *best && valid_partition(g, assign, parts) {
                *best = parts;
            }
            return;
        }
        if parts + (g.n() - v) <= *best {
            return;
        }
        assign.push(None);
        rec(g, v + 1, assign, parts, best);
        assign.pop();
        for p in 0..=parts {
            assign.push(Some(p));
            rec(g, v + 1, assign, parts.max(p + 1), best);
            assign.pop();
        }
    }
    let mut best = 0;
    rec(g, 0, &mut Vec::new(), 0, &mut best);
    best
}

fn valid_partition(g: &SimpleGraph, assign: &[Option<usize>], parts: usize) -> bool {
    let sets: Vec<BTreeSet<usize>> =
        (0..parts).map(|p| (0..g.n()).filter(|&v| assign[v] == Some(p)).collect()).collect();
    if !sets.iter().all(|s| g.is_connected_subset(s)) {
        return false;
    }
    for a in 0..parts {
        for b in a + 1..parts {
            let touch = sets[a].iter().any(|&u| g.neighbors(u).any(|w| sets[b].contains(&w)));
            if !touch {
                return false;
            }
        }
    }
    true
}

/// Treewidth as the best width over all elimination orderings (depth-first,
/// cut off once a branch cannot beat the best ordering found).
pub fn brute_treewidth(g: &SimpleGraph) -> usize {
    fn rec(adj: &[u32], alive: u32, width: usize, best: &mut usize) {
        if alive == 0 {
            *best = (*best).min(width);
            return;
        }
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let nb = adj[v] & alive & !(1 << v);
            let w = width.max(nb.count_ones() as usize);
            if w >= *best {
                continue;
            }
            let mut next = adj.to_vec();
            let mut m = nb;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                next[u] |= nb & !(1 << u);
            }
            rec(&next, alive & !(1 << v), w, best);
        }
    }
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0, |m, w| m | 1 << w)).collect();
    let mut best = n;
    rec(&adj, (1u32 << n) - 1, 0, &mut best);
    best
}

/// A random minor: a random mix of edge contractions, vertex deletions and
/// edge deletions, keeping at least one vertex.
pub fn random_minor(rng: &mut ChaCha8Rng, g: &SimpleGraph) -> SimpleGraph {
    let mut h = g.strip_labels();
    let steps = rng.gen_range(0..=g.n());
    for _ in 0..steps {
        let edges: Vec<(usize, usize)> = h.edges().collect();
        match rng.gen_range(0..4) {
            0 | 1 if !edges.is_empty() => {
                let &(u, v) = edges.choose(rng).unwrap();
                h = h.contract(u, v);
            }
            2 if h.n() > 1 => {
                let v = rng.gen_range(0..h.n());
                h = h.delete_vertex(v);
            }
            _ if !edges.is_empty() => {
                let &(u, v) = edges.choose(rng).unwrap();
                h.remove_edge(u, v);
            }
            _ => {}
        }
    }
    h
}

/// A connected vertex set grown from a random start, avoiding full vertices.
pub fn random_connected_set(
    rng: &mut ChaCha8Rng,
    g: &SimpleGraph,
    size: usize,
    usable: &dyn Fn(usize) -> bool,
) -> Option<BTreeSet<usize>> {
    let starts: Vec<usize> = (0..g.n()).filter(|&v| usable(v)).collect();
    let &start = starts.choose(rng)?;
    let mut set = BTreeSet::from([start]);
    while set.len() < size {
        let frontier: Vec<usize> = set
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|w| !set.contains(w) && usable(*w))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        match frontier.choose(rng) {
            Some(&w) => {
                set.insert(w);
            }
            None => break,
        }
    }
    Some(set)
}

/// Largest set of pairwise adjacent vertices (exhaustive; small graphs only).
pub fn max_clique(g: &SimpleGraph) -> Vec<usize> {
    let n = g.n();
    let mut best = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize <= best.len() {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if g.is_clique(&set) {
            best = set;
        }
    }
    best
}
