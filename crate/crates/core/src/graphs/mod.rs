//! Undirected simple graphs on a bit-matrix, their products, and exact
//! independence / chromatic number solvers.

mod chromatic;
pub mod io;
mod mis;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ks::{MeasurementCover, OperatorSet};

pub use chromatic::{
    chromatic_number, chromatic_number_with_budget, is_proper_coloring, ChromaticResult,
    DEFAULT_CHROMATIC_BUDGET,
};
pub use mis::{
    independence_number, independence_number_with_budget, is_independent_set, IndependenceResult,
    DEFAULT_MIS_BUDGET,
};

/// Fixed-size bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = BitSet::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexLabel {
    /// Copy of element `element` inside measurement `subset`.
    Slot { subset: usize, element: usize },
    /// Vertex `(left, right)` of a product graph.
    Pair { left: usize, right: usize },
    /// `+-` string of a Hadamard graph vertex.
    Signs(String),
    Text(String),
}

/// Undirected simple graph with bit-matrix adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<BitSet>,
    labels: Option<Vec<VertexLabel>>,
    clique_partition: Option<Vec<Vec<usize>>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            rows: vec![BitSet::new(n); n],
            labels: None,
            clique_partition: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n).expect("in range");
            }
        } else if n == 2 {
            g.add_edge(0, 1).expect("in range");
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Invalid(format!("edge ({u}, {v}) outside 0..{}", self.n)));
        }
        if u == v {
            return Err(Error::Invalid(format!("self-loop at {u}")));
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum::<usize>() / 2
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &BitSet {
        &self.rows[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for u in 0..self.n {
            for v in self.rows[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn labels(&self) -> Option<&[VertexLabel]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<VertexLabel>) -> Result<()> {
        if labels.len() != self.n {
            return Err(Error::Invalid(format!("{} labels for {} vertices", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(())
    }

    pub fn clique_partition(&self) -> Option<&[Vec<usize>]> {
        self.clique_partition.as_deref()
    }

    /// Installs a clique partition after checking it partitions the vertex
    /// set and every part is a clique.
    pub fn set_clique_partition(&mut self, parts: Vec<Vec<usize>>) -> Result<()> {
        let mut seen = vec![false; self.n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= self.n || seen[v] {
                    return Err(Error::Invalid(format!("clique part {i} repeats or overflows vertex {v}")));
                }
                seen[v] = true;
            }
            for (a, &u) in part.iter().enumerate() {
                for &v in &part[a + 1..] {
                    if !self.adjacent(u, v) {
                        return Err(Error::Invalid(format!("clique part {i} misses edge ({u}, {v})")));
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("clique partition misses vertex {v}")));
        }
        self.clique_partition = Some(parts);
        Ok(())
    }

    /// Same vertex set and edge set, ignoring labels and partitions.
    pub fn same_edges(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows == other.rows
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(a, &u)| vs[a + 1..].iter().all(|&v| self.adjacent(u, v)))
    }
}

/// Orthogonality graph of the multiset union of the cover's measurements:
/// one vertex per (measurement, element) slot, adjacent iff the operators
/// are trace-orthogonal. Each measurement is installed as a clique part.
pub fn orthogonality_graph(set: &OperatorSet, cover: &MeasurementCover) -> Result<Graph> {
    if cover.is_empty() {
        return Err(Error::pre("orthogonality graph needs a nonempty cover"));
    }
    let ortho = crate::ks::orthogonality_table(set)?;
    let slots: Vec<(usize, usize)> = cover
        .subsets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |&e| (i, e)))
        .collect();
    let mut g = Graph::empty(slots.len());
    for a in 0..slots.len() {
        for b in (a + 1)..slots.len() {
            let (ea, eb) = (slots[a].1, slots[b].1);
            if ea != eb && ortho[ea][eb] {
                g.add_edge(a, b)?;
            }
        }
    }
    g.set_labels(
        slots
            .iter()
            .map(|&(subset, element)| VertexLabel::Slot { subset, element })
            .collect(),
    )?;
    let mut parts = Vec::with_capacity(cover.len());
    let mut next = 0;
    for s in &cover.subsets {
        parts.push((next..next + s.len()).collect());
        next += s.len();
    }
    g.set_clique_partition(parts)
        .map_err(|e| Error::Integrity(format!("measurement is not a clique: {e}")))?;
    Ok(g)
}

/// `G [] H`: `(v,i) ~ (w,j)` iff `v = w` and `i ~ j`, or `v ~ w` and `i = j`.
/// Vertex `(v, i)` has index `v * |V(H)| + i`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let (ng, nh) = (g.n_vertices(), h.n_vertices());
    let mut out = Graph::empty(ng * nh);
    for v in 0..ng {
        for i in 0..nh {
            let a = v * nh + i;
            for j in h.neighbors(i).iter() {
                out.rows[a].insert(v * nh + j);
            }
            for w in g.neighbors(v).iter() {
                out.rows[a].insert(w * nh + i);
            }
        }
    }
    out.labels = Some(product_labels(ng, nh));
    out
}

/// `G x H` strong product: adjacent iff each coordinate is equal or
/// adjacent, and not both equal.
pub fn strong_product(g: &Graph, h: &Graph) -> Graph {
    let (ng, nh) = (g.n_vertices(), h.n_vertices());
    let mut out = Graph::empty(ng * nh);
    for v in 0..ng {
        for w in 0..ng {
            let first = v == w || g.adjacent(v, w);
            if !first {
                continue;
            }
            for i in 0..nh {
                for j in 0..nh {
                    if (v, i) == (w, j) {
                        continue;
                    }
                    if i == j || h.adjacent(i, j) {
                        out.rows[v * nh + i].insert(w * nh + j);
                    }
                }
            }
        }
    }
    out.labels = Some(product_labels(ng, nh));
    out
}

fn product_labels(ng: usize, nh: usize) -> Vec<VertexLabel> {
    (0..ng * nh)
        .map(|a| VertexLabel::Pair {
            left: a / nh,
            right: a % nh,
        })
        .collect()
}

pub fn complement(g: &Graph) -> Graph {
    let n = g.n_vertices();
    let mut out = Graph::empty(n);
    for u in 0..n {
        let mut row = BitSet::full(n);
        row.difference_with(g.neighbors(u));
        row.remove(u);
        out.rows[u] = row;
    }
    out
}

/// Largest Hadamard graph built as an explicit bit-matrix
/// (`2^14` vertices, 32 MiB of adjacency).
pub const HADAMARD_MATERIALIZE_MAX: usize = 14;

/// `Omega_n`: vertices `{+-1}^n` as `n`-bit strings (bit set = -1), adjacent
/// iff the integer inner product `n - 2 * popcount(u ^ v)` is zero.
pub fn hadamard_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Invalid("Hadamard graph needs n >= 1".into()));
    }
    if n > HADAMARD_MATERIALIZE_MAX {
        return Err(Error::budget("Hadamard graph dimension (materialized)", HADAMARD_MATERIALIZE_MAX, n));
    }
    let size = 1usize << n;
    let mut g = Graph::empty(size);
    if n.is_multiple_of(2) {
        for u in 0..size {
            for v in (u + 1)..size {
                if hadamard_inner(n, u, v) == 0 {
                    g.rows[u].insert(v);
                    g.rows[v].insert(u);
                }
            }
        }
    }
    g.labels = Some((0..size).map(|u| VertexLabel::Signs(sign_string(n, u))).collect());
    Ok(g)
}

/// `<u, v>` for the sign vectors encoded by bit strings `u`, `v`.
pub fn hadamard_inner(n: usize, u: usize, v: usize) -> i64 {
    n as i64 - 2 * ((u ^ v).count_ones() as i64)
}

/// Sign vector of vertex `u`: coordinate `j` is `-1` iff bit `j` is set.
pub fn hadamard_signs(n: usize, u: usize) -> Vec<i8> {
    (0..n).map(|j| if u >> j & 1 == 1 { -1 } else { 1 }).collect()
}

fn sign_string(n: usize, u: usize) -> String {
    hadamard_signs(n, u)
        .iter()
        .map(|&s| if s > 0 { '+' } else { '-' })
        .collect()
}
