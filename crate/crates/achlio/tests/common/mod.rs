//! Independent test oracles: brute-force routines that share no code with
//! the production implementations they check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use achlio::graph::{Graph, Vertex};

/// Exhaustive rotation closure: BFS over full path states, applying every
/// elementary rotation that fixes the start vertex. Returns all reachable
/// endpoints. Exponential; small n only.
pub fn exhaustive_closure_endpoints(g: &Graph, base: &[Vertex]) -> BTreeSet<Vertex> {
    let h = base.len() - 1;
    let mut seen_paths: HashSet<Vec<Vertex>> = HashSet::from([base.to_vec()]);
    let mut endpoints = BTreeSet::from([base[h]]);
    let mut queue = VecDeque::from([base.to_vec()]);
    while let Some(path) = queue.pop_front() {
        let end = path[h];
        for (i, &v) in path.iter().enumerate() {
            if i >= h - 1 {
                continue;
            }
            if !g.has_edge(v, end) {
                continue;
            }
            let mut next = path.clone();
            next[i + 1..].reverse();
            if seen_paths.insert(next.clone()) {
                endpoints.insert(next[h]);
                queue.push_back(next);
            }
        }
    }
    endpoints
}

/// A longest path by bitmask dynamic programming (vertices ≤ ~16).
pub fn longest_path_dp(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    assert!(n <= 16, "longest_path_dp is exponential in n");
    // reach[mask] = bitset of possible path endpoints using exactly `mask`
    let mut reach = vec![0u32; 1 << n];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    let mut best = (1u32 << 0, 0usize); // (mask, endpoint)
    for mask in 1u32..(1 << n) as u32 {
        let ends = reach[mask as usize];
        if ends == 0 {
            continue;
        }
        if mask.count_ones() > best.0.count_ones() {
            best = (mask, ends.trailing_zeros() as usize);
        }
        for v in 0..n {
            if ends & (1 << v) == 0 {
                continue;
            }
            for w in g.neighbors(v as Vertex) {
                let bit = 1u32 << w;
                if mask & bit == 0 {
                    reach[(mask | bit) as usize] |= bit;
                }
            }
        }
    }
    // reconstruct
    let (mut mask, mut cur) = best;
    let mut path = vec![cur as Vertex];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1u32 << cur);
        let prev = (0..n)
            .find(|&u| {
                reach[prev_mask as usize] & (1 << u) != 0 && g.has_edge(u as Vertex, cur as Vertex)
            })
            .expect("path reconstruction");
        path.push(prev as Vertex);
        mask = prev_mask;
        cur = prev;
    }
    path.reverse();
    path
}

/// Longest path length in edges.
pub fn longest_path_len(g: &Graph) -> usize {
    longest_path_dp(g).len() - 1
}

/// Whether g contains a simple cycle on exactly `len` vertices.
pub fn has_cycle_of_len(g: &Graph, len: usize) -> bool {
    let n = g.n();
    assert!(n <= 16);
    if len < 3 || len > n {
        return false;
    }
    // for each anchor s, DP over masks whose lowest set bit is s
    for s in 0..n {
        let mut reach = vec![0u32; 1 << n];
        reach[1 << s] = 1 << s;
        for mask in 1u32..(1 << n) as u32 {
            if (mask.trailing_zeros() as usize) != s {
                continue;
            }
            let ends = reach[mask as usize];
            if ends == 0 {
                continue;
            }
            if mask.count_ones() as usize == len {
                for v in 0..n {
                    if v != s && ends & (1 << v) != 0 && g.has_edge(v as Vertex, s as Vertex) {
                        return true;
                    }
                }
                continue;
            }
            for v in 0..n {
                if ends & (1 << v) == 0 {
                    continue;
                }
                for w in g.neighbors(v as Vertex) {
                    let bit = 1u32 << w;
                    if mask & bit == 0 && (w as usize) > s {
                        reach[(mask | bit) as usize] |= bit;
                    }
                }
            }
        }
    }
    false
}

/// Edge-boundary by direct scan over the edge list.
pub fn edge_boundary_scan(g: &Graph, s: &[Vertex]) -> usize {
    let mut inside = vec![false; g.n()];
    for &v in s {
        inside[v as usize] = true;
    }
    g.edges()
        .into_iter()
        .filter(|&(u, v)| inside[u as usize] != inside[v as usize])
        .count()
}

/// All-pairs distances by repeated BFS; None for unreachable.
pub fn bfs_all_pairs(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.n();
    let mut dist = vec![vec![None; n]; n];
    for s in 0..n {
        let mut d = vec![None; n];
        d[s] = Some(0u32);
        let mut q = VecDeque::from([s as Vertex]);
        while let Some(u) = q.pop_front() {
            let du = d[u as usize].unwrap();
            for w in g.neighbors(u) {
                if d[w as usize].is_none() {
                    d[w as usize] = Some(du + 1);
                    q.push_back(w);
                }
            }
        }
        dist[s] = d;
    }
    dist
}
