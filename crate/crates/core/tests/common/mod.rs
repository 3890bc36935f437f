//! Independent oracles shared by the integration tests. Nothing here calls
//! the solvers under test.
#![allow(dead_code)]

use kscore::graphs::Graph;
use proptest::prelude::*;

/// Random graph on `min..=max` vertices with random edge density.
pub fn graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max).prop_flat_map(|n| {
        let m = n * n.saturating_sub(1) / 2;
        (Just(n), 0.0..1.0f64, proptest::collection::vec(0.0..1.0f64, m))
    })
    .prop_map(|(n, p, coins)| {
        let mut g = Graph::empty(n);
        let mut k = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if coins[k] < p {
                    g.add_edge(u, v).unwrap();
                }
                k += 1;
            }
        }
        g
    })
}

/// Adjacency rows as bitmasks; requires at most 64 vertices.
pub fn masks(g: &Graph) -> Vec<u64> {
    let n = g.n_vertices();
    assert!(n <= 64);
    (0..n)
        .map(|u| (0..n).filter(|&v| g.adjacent(u, v)).fold(0u64, |m, v| m | 1 << v))
        .collect()
}

/// Independence number by scanning all `2^n` subsets.
pub fn alpha_by_subsets(g: &Graph) -> usize {
    let adj = masks(g);
    let n = g.n_vertices();
    assert!(n <= 24);
    let mut best = 0;
    for s in 0u64..(1 << n) {
        let independent = (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0);
        if independent {
            best = best.max(s.count_ones() as usize);
        }
    }
    best
}

/// Independence number by the textbook recursion
/// `alpha(G) = max(alpha(G - v), 1 + alpha(G - N[v]))` on the vertex of
/// maximum degree, taking degree-0 and degree-1 vertices greedily.
pub fn alpha_recursive(g: &Graph) -> usize {
    fn go(adj: &[u64], live: u64) -> usize {
        if live == 0 {
            return 0;
        }
        let mut best_v = usize::MAX;
        let mut best_d = 0;
        let mut rest = live;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (adj[v] & live).count_ones();
            if d <= 1 {
                return 1 + go(adj, live & !(adj[v] | 1 << v));
            }
            if d > best_d {
                best_d = d;
                best_v = v;
            }
        }
        let v = best_v;
        let without = go(adj, live & !(1 << v));
        let with = 1 + go(adj, live & !(adj[v] | 1 << v));
        without.max(with)
    }
    let n = g.n_vertices();
    let live = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(&masks(g), live)
}

/// Chromatic number by dynamic programming over vertex subsets:
/// `chi(S) = 1 + min chi(S \ T)` over independent `T` containing the lowest
/// vertex of `S`. `O(3^n)`.
pub fn chi_by_subsets(g: &Graph) -> usize {
    let n = g.n_vertices();
    assert!(n <= 20);
    let adj = masks(g);
    let full = (1usize << n) - 1;
    let mut independent = vec![true; full + 1];
    for s in 1..=full {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        independent[s] = independent[rest] && adj[v] as usize & rest == 0;
    }
    let mut chi = vec![0u8; full + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut best = u8::MAX;
        // submasks t of rest; the colour class is t | low
        let mut t = rest;
        loop {
            if independent[t | low] {
                best = best.min(1 + chi[rest & !t]);
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & rest;
        }
        chi[s] = best;
    }
    chi[full] as usize
}

pub fn is_independent(g: &Graph, vs: &[usize]) -> bool {
    vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && !g.adjacent(u, v)))
}

pub fn is_proper(g: &Graph, col: &[usize], k: usize) -> bool {
    col.len() == g.n_vertices() && col.iter().all(|&c| c < k) && g.edges().iter().all(|&(u, v)| col[u] != col[v])
}
