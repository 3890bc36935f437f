use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{BitSet, Graph};

pub const DEFAULT_MIS_BUDGET: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceResult {
    pub alpha: usize,
    pub witness: Vec<usize>,
    pub nodes: u64,
}

pub fn is_independent_set(g: &Graph, vs: &[usize]) -> bool {
    let mut seen = vec![false; g.n_vertices()];
    for &v in vs {
        if v >= g.n_vertices() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    vs.iter()
        .enumerate()
        .all(|(a, &u)| vs[a + 1..].iter().all(|&v| !g.adjacent(u, v)))
}

pub fn independence_number(g: &Graph) -> Result<IndependenceResult> {
    independence_number_with_budget(g, DEFAULT_MIS_BUDGET)
}

/// Exact maximum independent set.
///
/// Branch and bound over candidate bitsets: the candidates are greedily
/// covered by cliques of `g` (an independent set meets each clique at most
/// once), which bounds what the branch can still gain. Vertices are
/// processed in order of decreasing degree in the complement.
pub fn independence_number_with_budget(g: &Graph, max_vertices: usize) -> Result<IndependenceResult> {
    let n = g.n_vertices();
    if n > max_vertices {
        return Err(Error::budget("vertices for exact independence number", max_vertices, n));
    }
    if n == 0 {
        return Ok(IndependenceResult {
            alpha: 0,
            witness: Vec::new(),
            nodes: 0,
        });
    }
    // relabel so low-degree vertices (most non-neighbours) come first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj = vec![BitSet::new(n); n];
    for (i, &v) in order.iter().enumerate() {
        for w in g.neighbors(v).iter() {
            adj[i].insert(pos[w]);
        }
    }
    let mut search = Search::new(&adj, None);
    search.expand(BitSet::full(n));
    let alpha = search.best.len();
    // canonical witness: lexicographically smallest maximum independent set
    let mut witness = Vec::with_capacity(alpha);
    let mut open = BitSet::full(n);
    for v in 0..n {
        if witness.len() == alpha {
            break;
        }
        if !open.contains(pos[v]) {
            continue;
        }
        open.remove(pos[v]);
        let mut rest = open.clone();
        rest.difference_with(&adj[pos[v]]);
        let need = alpha - witness.len() - 1;
        let mut probe = Search::new(&adj, Some(need));
        if need == 0 || probe.expand(rest.clone()) {
            witness.push(v);
            open = rest;
        }
        search.nodes += probe.nodes;
    }
    if witness.len() != alpha || !is_independent_set(g, &witness) {
        return Err(Error::Integrity("independence witness fails re-validation".into()));
    }
    Ok(IndependenceResult {
        alpha,
        witness,
        nodes: search.nodes,
    })
}

struct Search<'a> {
    adj: &'a [BitSet],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    /// Stop as soon as a set of this size is found.
    target: Option<usize>,
}

impl<'a> Search<'a> {
    fn new(adj: &'a [BitSet], target: Option<usize>) -> Self {
        Search {
            adj,
            best: Vec::new(),
            current: Vec::new(),
            nodes: 0,
            target,
        }
    }

    fn floor(&self) -> usize {
        self.best.len().max(self.target.map_or(0, |t| t.saturating_sub(1)))
    }

    fn done(&self) -> bool {
        self.target.is_some_and(|t| self.best.len() >= t)
    }

    /// Greedy clique cover of `p`; returns vertices with the cumulative
    /// number of cliques used up to and including each one.
    fn clique_cover(&self, p: &BitSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.count());
        let mut rest = p.clone();
        let mut k = 0;
        while !rest.is_empty() {
            k += 1;
            let mut q = rest.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                rest.remove(v);
                out.push((v, k));
                q.intersect_with(&self.adj[v]);
            }
        }
        out
    }

    /// Returns true once the target (if any) has been reached.
    fn expand(&mut self, mut p: BitSet) -> bool {
        self.nodes += 1;
        let cover = self.clique_cover(&p);
        for &(v, k) in cover.iter().rev() {
            if self.current.len() + k <= self.floor() {
                return false;
            }
            self.current.push(v);
            let mut next = p.clone();
            next.difference_with(&self.adj[v]);
            next.remove(v);
            if next.is_empty() {
                if self.current.len() > self.floor() {
                    self.best = self.current.clone();
                }
            } else if self.expand(next) {
                return true;
            }
            self.current.pop();
            if self.done() {
                return true;
            }
            p.remove(v);
        }
        false
    }
}
