//! Complete decoding of graph cycle codes: a minimum-weight edge set whose
//! boundary is a prescribed even vertex set, via all-pairs shortest paths
//! between the odd vertices plus an exact minimum-weight perfect matching
//! (bitmask dynamic program over the metric closure).

use super::DecodeError;
use crate::gf2::BitVector;
use crate::graph::Graph;

/// Exact matching is O(2^k k); desk-scale odd sets stay well below this.
const MAX_ODD_PER_COMPONENT: usize = 24;

pub fn tjoin_decode(graph: &Graph, odd_set: &[usize]) -> Result<BitVector, DecodeError> {
    let mut odd: Vec<usize> = odd_set.to_vec();
    odd.sort_unstable();
    odd.dedup();
    let comp = graph.components();
    let mut by_component: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &v in &odd {
        by_component.entry(comp[v]).or_default().push(v);
    }
    let mut join = BitVector::zeros(graph.n_edges());
    for (c, group) in by_component {
        if group.len() % 2 != 0 {
            return Err(DecodeError::OddParity(c));
        }
        if group.len() > MAX_ODD_PER_COMPONENT {
            return Err(DecodeError::TooLarge(format!(
                "{} odd vertices in one component (exact matching cap is {MAX_ODD_PER_COMPONENT})",
                group.len()
            )));
        }
        join.xor_assign(&component_join(graph, &group));
    }
    Ok(join)
}

fn component_join(graph: &Graph, odd: &[usize]) -> BitVector {
    let k = odd.len();
    let mut join = BitVector::zeros(graph.n_edges());
    if k == 0 {
        return join;
    }
    let searches: Vec<(Vec<usize>, Vec<Option<(usize, usize)>>)> =
        odd.iter().map(|&v| graph.bfs(v)).collect();
    let dist = |i: usize, j: usize| searches[i].0[odd[j]];

    // dp over subsets of the odd vertices; pair the lowest unmatched vertex.
    let full = 1usize << k;
    let mut dp = vec![usize::MAX; full];
    let mut choice = vec![usize::MAX; full];
    dp[0] = 0;
    for mask in 1..full {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut sub = rest;
        while sub != 0 {
            let j = sub.trailing_zeros() as usize;
            sub &= sub - 1;
            let prev = rest & !(1 << j);
            if dp[prev] != usize::MAX && dist(i, j) != usize::MAX {
                let cost = dp[prev] + dist(i, j);
                if cost < dp[mask] {
                    dp[mask] = cost;
                    choice[mask] = j;
                }
            }
        }
    }
    // Reconstruct the pairs and xor the underlying shortest paths.
    let mut mask = full - 1;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask];
        let (_, parents) = &searches[i];
        let mut v = odd[j];
        while let Some((p, e)) = parents[v] {
            join.flip(e);
            v = p;
            if v == odd[i] {
                break;
            }
        }
        mask &= !(1 << i);
        mask &= !(1 << j);
    }
    join
}
