use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;

pub const DEFAULT_CHROMATIC_BUDGET: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    pub chi: usize,
    /// `coloring[v]` in `0..chi`.
    pub coloring: Vec<usize>,
    pub nodes: u64,
}

pub fn is_proper_coloring(g: &Graph, coloring: &[usize], colors: usize) -> bool {
    coloring.len() == g.n_vertices()
        && coloring.iter().all(|&c| c < colors)
        && g.edges().iter().all(|&(u, v)| coloring[u] != coloring[v])
}

pub fn chromatic_number(g: &Graph) -> Result<ChromaticResult> {
    chromatic_number_with_budget(g, DEFAULT_CHROMATIC_BUDGET)
}

/// Exact chromatic number by iterative deepening on the number of colours,
/// from a greedy clique lower bound up to the greedy DSATUR colouring.
pub fn chromatic_number_with_budget(g: &Graph, max_vertices: usize) -> Result<ChromaticResult> {
    let n = g.n_vertices();
    if n > max_vertices {
        return Err(Error::budget("vertices for exact chromatic number", max_vertices, n));
    }
    if n == 0 {
        return Ok(ChromaticResult {
            chi: 0,
            coloring: Vec::new(),
            nodes: 0,
        });
    }
    let mut best = Dsatur::new(g).greedy();
    let lower = greedy_clique(g);
    let mut nodes = 0;
    for c in lower..best.len_colors() {
        let mut s = Dsatur::new(g);
        let found = s.color_with(c);
        nodes += s.nodes;
        if found {
            best = Coloring(s.color.iter().map(|c| c.expect("complete")).collect());
            break;
        }
    }
    let chi = best.len_colors();
    if !is_proper_coloring(g, &best.0, chi) {
        return Err(Error::Integrity("colouring witness fails re-validation".into()));
    }
    Ok(ChromaticResult {
        chi,
        coloring: best.0,
        nodes,
    })
}

struct Coloring(Vec<usize>);

impl Coloring {
    fn len_colors(&self) -> usize {
        self.0.iter().max().map_or(0, |&m| m + 1)
    }
}

fn greedy_clique(g: &Graph) -> usize {
    let n = g.n_vertices();
    let mut best = 1;
    for start in 0..n {
        let mut cands = g.neighbors(start).clone();
        let mut size = 1;
        while let Some(v) = cands.iter().max_by_key(|&v| (g.neighbors(v).intersection_count(&cands), usize::MAX - v)) {
            size += 1;
            cands.intersect_with(g.neighbors(v));
        }
        best = best.max(size);
    }
    best
}

struct Dsatur<'a> {
    g: &'a Graph,
    color: Vec<Option<usize>>,
    nodes: u64,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph) -> Self {
        Dsatur {
            g,
            color: vec![None; g.n_vertices()],
            nodes: 0,
        }
    }

    fn used_by_neighbors(&self, v: usize) -> Vec<bool> {
        let mut used = vec![false; self.g.n_vertices() + 1];
        for w in self.g.neighbors(v).iter() {
            if let Some(c) = self.color[w] {
                used[c] = true;
            }
        }
        used
    }

    /// Uncoloured vertex of maximum saturation, then maximum uncoloured
    /// degree, then smallest index.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.n_vertices() {
            if self.color[v].is_some() {
                continue;
            }
            let sat = self.used_by_neighbors(v).iter().filter(|&&b| b).count();
            let deg = self.g.neighbors(v).iter().filter(|&w| self.color[w].is_none()).count();
            if best.is_none_or(|(s, d, _)| (sat, deg) > (s, d)) {
                best = Some((sat, deg, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn greedy(&mut self) -> Coloring {
        while let Some(v) = self.pick() {
            let used = self.used_by_neighbors(v);
            self.color[v] = used.iter().position(|&b| !b);
        }
        Coloring(self.color.iter().map(|c| c.expect("complete")).collect())
    }

    fn color_with(&mut self, c: usize) -> bool {
        self.nodes += 1;
        let Some(v) = self.pick() else {
            return true;
        };
        let used = self.used_by_neighbors(v);
        let highest = self.color.iter().flatten().max().map_or(0, |&m| m + 1);
        // a fresh colour is interchangeable with any other fresh colour
        for k in 0..c.min(highest + 1) {
            if used[k] {
                continue;
            }
            self.color[v] = Some(k);
            if self.color_with(c) {
                return true;
            }
        }
        self.color[v] = None;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::cartesian_product;

    fn brute_chi(g: &Graph) -> usize {
        let n = g.n_vertices();
        for c in 1..=n {
            let total = c.pow(n as u32);
            for code in 0..total {
                let mut x = code;
                let col: Vec<usize> = (0..n)
                    .map(|_| {
                        let d = x % c;
                        x /= c;
                        d
                    })
                    .collect();
                if is_proper_coloring(g, &col, c) {
                    return c;
                }
            }
        }
        n
    }

    #[test]
    fn small_graphs() {
        let c5 = Graph::cycle(5);
        assert_eq!(brute_chi(&c5), 3);
        assert_eq!(chromatic_number(&c5).unwrap().chi, 3);
        for n in 1..8 {
            assert_eq!(chromatic_number(&Graph::complete(n)).unwrap().chi, n);
            assert_eq!(chromatic_number(&Graph::empty(n)).unwrap().chi, 1);
        }
        let p = cartesian_product(&c5, &Graph::complete(3));
        assert_eq!(chromatic_number(&p).unwrap().chi, 3);
    }

    #[test]
    fn budget_refusal() {
        assert!(matches!(
            chromatic_number_with_budget(&Graph::empty(10), 5),
            Err(Error::Budget { .. })
        ));
    }
}
