use super::{OracleConfig, OracleError};
use crate::graph::SimpleGraph;

/// Exact treewidth by dynamic programming over the set of already eliminated
/// vertices: eliminating `v` after the set `S` creates a clique on the vertices
/// outside `S ∪ {v}` that `v` reaches through `S`, so
/// `TW(S ∪ {v}) = min_v max(TW(S), |Q(S, v)|)`.
pub fn treewidth_oracle(g: &SimpleGraph, cfg: &OracleConfig) -> Result<usize, OracleError> {
    let n = g.n();
    let cap = cfg.max_vertices.min(24);
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0, |m, w| m | 1 << w)).collect();
    let full = (1u32 << n) - 1;
    // tw[S]: width of the best elimination of S first; -1 for the empty set
    let mut tw = vec![i32::MAX; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut best = i32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let before = s & !(1 << v);
            let q = reach_outside(&adj, before, v) as i32;
            best = best.min(tw[before as usize].max(q));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize].max(0) as usize)
}

/// Number of vertices outside `eliminated ∪ {v}` adjacent to the component of
/// `v` in `G[eliminated ∪ {v}]`.
fn reach_outside(adj: &[u32], eliminated: u32, v: usize) -> u32 {
    let mut comp = 1u32 << v;
    loop {
        let mut grown = comp;
        let mut c = comp;
        while c != 0 {
            let u = c.trailing_zeros() as usize;
            c &= c - 1;
            grown |= adj[u] & eliminated;
        }
        if grown == comp {
            break;
        }
        comp = grown;
    }
    let mut nb = 0;
    let mut c = comp;
    while c != 0 {
        let u = c.trailing_zeros() as usize;
        c &= c - 1;
        nb |= adj[u];
    }
    (nb & !comp & !eliminated).count_ones()
}
