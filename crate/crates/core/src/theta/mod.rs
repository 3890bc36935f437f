//! Lovász theta function.
//!
//! Two equivalent SDPs are available and the one with fewer equality
//! constraints is solved:
//!
//! * edge form: `max <J, X>` with `Tr X = 1`, `X_uv = 0` on edges, `X >= 0`;
//! * non-edge form: `min t` with `Y = t I - A >= 0`, where `A` has ones on
//!   the diagonal and on non-edges and is free on edges.
//!
//! Whatever the iterate, a feasible point of the edge form yields a lower
//! bound and `lambda_max(A)` of any admissible `A` yields an upper bound.
//! Both are extracted every iteration after repairing the iterate, so the
//! reported interval always brackets theta (up to eigenvalue round-off).

mod sdp;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
pub use sdp::SparseSym;
use sdp::{Problem, Solver};

pub const DEFAULT_THETA_EPS: f64 = 1e-6;
pub const THETA_MAX_VERTICES: usize = 200;
pub const THETA_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    Edge,
    NonEdge,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaResult {
    /// Certified lower bound.
    pub value: f64,
    /// Feasible point of the edge form with `<J, X> = value`.
    pub primal_matrix: Vec<Vec<f64>>,
    /// Certified upper bound.
    pub dual_bound: f64,
    /// Admissible `A` (ones on diagonal and non-edges) with
    /// `lambda_max(A) = dual_bound`.
    pub dual_matrix: Vec<Vec<f64>>,
    pub gap: f64,
    pub iterations: usize,
    pub formulation: Formulation,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn non_edges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n_vertices();
    let mut out = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if !g.adjacent(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Zero the edge entries, shift into the PSD cone and normalise the trace.
fn repair_lower(g: &Graph, x: &DMatrix<f64>) -> Option<(f64, DMatrix<f64>)> {
    let n = g.n_vertices();
    let mut m = (x + x.transpose()) * 0.5;
    for (u, v) in g.edges() {
        m[(u, v)] = 0.0;
        m[(v, u)] = 0.0;
    }
    let lmin = m.clone().symmetric_eigenvalues().min();
    if lmin < 0.0 {
        for i in 0..n {
            m[(i, i)] -= lmin;
        }
    }
    let tr = m.trace();
    if !(tr > 0.0) || !tr.is_finite() {
        return None;
    }
    m /= tr;
    Some((m.sum(), m))
}

/// Fill diagonal and non-edges with ones; `edge_value(u, v)` supplies the
/// free entries.
fn admissible(g: &Graph, edge_value: impl Fn(usize, usize) -> f64) -> (f64, DMatrix<f64>) {
    let n = g.n_vertices();
    let mut a = DMatrix::from_element(n, n, 1.0);
    for (u, v) in g.edges() {
        let w = edge_value(u, v);
        a[(u, v)] = w;
        a[(v, u)] = w;
    }
    let lmax = a.clone().symmetric_eigenvalues().max();
    (lmax, a)
}

struct Bounds {
    lower: f64,
    primal: DMatrix<f64>,
    upper: f64,
    dual: DMatrix<f64>,
}

impl Bounds {
    fn offer_lower(&mut self, cand: Option<(f64, DMatrix<f64>)>) {
        if let Some((v, m)) = cand {
            if v.is_finite() && v > self.lower {
                self.lower = v;
                self.primal = m;
            }
        }
    }

    fn offer_upper(&mut self, (v, m): (f64, DMatrix<f64>)) {
        if v.is_finite() && v < self.upper {
            self.upper = v;
            self.dual = m;
        }
    }
}

fn edge_problem(g: &Graph) -> Problem {
    let n = g.n_vertices();
    let mut a = vec![SparseSym::identity(n)];
    let mut b = vec![1.0];
    for (u, v) in g.edges() {
        a.push(SparseSym::entry(u, v));
        b.push(0.0);
    }
    Problem {
        n,
        c: DMatrix::from_element(n, n, 1.0),
        a,
        b: DVector::from_vec(b),
    }
}

/// `max -Y_00` subject to equal diagonal and `Y_uv = -1` on non-edges; then
/// `theta = 1 + Y_00` at the optimum.
fn non_edge_problem(g: &Graph) -> Problem {
    let n = g.n_vertices();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..n.saturating_sub(1) {
        a.push(SparseSym {
            entries: vec![(i, i, 1.0), (i + 1, i + 1, -1.0)],
        });
        b.push(0.0);
    }
    for (u, v) in non_edges(g) {
        a.push(SparseSym::entry(u, v));
        b.push(-1.0);
    }
    let mut c = DMatrix::zeros(n, n);
    c[(0, 0)] = -1.0;
    Problem {
        n,
        c,
        a,
        b: DVector::from_vec(b),
    }
}

pub fn lovasz_theta(g: &Graph, eps: f64) -> Result<ThetaResult> {
    lovasz_theta_with_budget(g, eps, THETA_MAX_VERTICES)
}

pub fn lovasz_theta_with_budget(g: &Graph, eps: f64, max_vertices: usize) -> Result<ThetaResult> {
    let n = g.n_vertices();
    if n > max_vertices {
        return Err(Error::budget("vertices for the theta SDP", max_vertices, n));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Invalid(format!("theta tolerance must be positive, got {eps}")));
    }
    if n == 0 {
        return Ok(ThetaResult {
            value: 0.0,
            primal_matrix: Vec::new(),
            dual_bound: 0.0,
            dual_matrix: Vec::new(),
            gap: 0.0,
            iterations: 0,
            formulation: Formulation::Edge,
        });
    }
    let n_edges = g.n_edges();
    let n_non = n * (n - 1) / 2 - n_edges;
    let formulation = if n_edges < (n - 1) + n_non {
        Formulation::Edge
    } else {
        Formulation::NonEdge
    };
    let edges = g.edges();
    let edge_index = |u: usize, v: usize| edges.binary_search(&(u.min(v), u.max(v))).ok();

    let mut bounds = Bounds {
        lower: f64::NEG_INFINITY,
        primal: DMatrix::zeros(n, n),
        upper: f64::INFINITY,
        dual: DMatrix::zeros(n, n),
    };
    // X = I/n and A = J are always admissible
    bounds.offer_lower(repair_lower(g, &DMatrix::identity(n, n)));
    bounds.offer_upper(admissible(g, |_, _| 1.0));

    let (problem, scale) = match formulation {
        Formulation::Edge => (edge_problem(g), 1.0),
        Formulation::NonEdge => (non_edge_problem(g), n as f64),
    };
    let mut solver = Solver::new(problem, scale);
    let mut iterations = 0;
    while bounds.upper - bounds.lower > eps && iterations < THETA_MAX_ITERATIONS {
        if solver.step().is_err() {
            break;
        }
        iterations += 1;
        let it = &solver.it;
        match formulation {
            Formulation::Edge => {
                bounds.offer_lower(repair_lower(g, &it.x));
                // y_0 I + sum_e y_e A_e - J >= 0, i.e. A = J - sum_e y_e A_e
                bounds.offer_upper(admissible(g, |u, v| {
                    1.0 - 0.5 * it.y[1 + edge_index(u, v).expect("edge")]
                }));
            }
            Formulation::NonEdge => {
                let z = solver.problem.adjoint(&it.y) - &solver.problem.c;
                bounds.offer_lower(repair_lower(g, &z));
                bounds.offer_upper(admissible(g, |u, v| -it.x[(u, v)]));
            }
        }
    }
    let gap = bounds.upper - bounds.lower;
    if !(gap <= eps) {
        return Err(Error::Convergence {
            iterations,
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    Ok(ThetaResult {
        value: bounds.lower,
        primal_matrix: rows(&bounds.primal),
        dual_bound: bounds.upper,
        dual_matrix: rows(&bounds.dual),
        gap,
        iterations,
        formulation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_edgeless() {
        for n in [1, 2, 5, 9] {
            let t = lovasz_theta(&Graph::complete(n), 1e-6).unwrap();
            assert!((t.value - 1.0).abs() <= 1e-6, "K_{n}: {t:?}");
            let t = lovasz_theta(&Graph::empty(n), 1e-6).unwrap();
            assert!((t.value - n as f64).abs() <= 1e-6, "empty {n}: {}", t.value);
        }
    }

    #[test]
    fn pentagon() {
        let t = lovasz_theta(&Graph::cycle(5), 1e-7).unwrap();
        assert!((t.value - 5f64.sqrt()).abs() < 1e-6, "{t:?}");
        assert!(t.value <= t.dual_bound);
    }

    #[test]
    fn both_formulations_agree() {
        let g = Graph::cycle(7);
        let t = lovasz_theta(&g, 1e-7).unwrap();
        let c = crate::graphs::complement(&g);
        let tc = lovasz_theta(&c, 1e-7).unwrap();
        assert_ne!(t.formulation, tc.formulation);
        // theta(C_n) theta(complement C_n) = n for vertex-transitive graphs
        assert!((t.value * tc.value - 7.0).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_eps() {
        assert!(lovasz_theta(&Graph::cycle(5), 0.0).is_err());
    }
}
