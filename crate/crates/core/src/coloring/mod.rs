//! Quantum colourings in normal form.
//!
//! A quantum `c`-colouring of rank `r` assigns to every vertex a projective
//! measurement `{P^v_0, ..., P^v_{c-1}}` of rank-`r` projectors on `C^{rc}`
//! such that adjacent vertices never share a colour outcome:
//! `Tr(P^v_a P^w_a) = 0` for every edge `(v, w)` and colour `a`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{hadamard_inner, is_proper_coloring, Graph};
use crate::ks::{classify_with_cover, Element, KsVerdict, MeasurementCover, OperatorSet, SetKind};
use crate::linalg::json::{decode_square, encode_entries};
use crate::linalg::{self, CMat, ExactKet, TolerancePolicy};

pub const HADAMARD_COLORING_MAX: usize = 16;

#[derive(Debug, Clone)]
enum Storage {
    Dense(Vec<Vec<CMat>>),
    /// `|u, a>` with amplitudes `u_j w^(a j) / sqrt(n)`, generated on demand.
    Hadamard { n: usize },
}

#[derive(Debug, Clone)]
pub struct QuantumColoring {
    c: usize,
    r: usize,
    n_vertices: usize,
    storage: Storage,
}

impl QuantumColoring {
    /// `projectors[v][a]` is `P^v_a`; only shapes are checked here.
    pub fn new(c: usize, r: usize, projectors: Vec<Vec<CMat>>) -> Result<Self> {
        if c == 0 || r == 0 {
            return Err(Error::Invalid("colour count and rank must be positive".into()));
        }
        let dim = r * c;
        for (v, ps) in projectors.iter().enumerate() {
            if ps.len() != c {
                return Err(Error::dim(format!("vertex {v} has {} projectors, expected {c}", ps.len())));
            }
            for (a, p) in ps.iter().enumerate() {
                if p.rows() != dim || p.cols() != dim {
                    return Err(Error::dim(format!(
                        "P[{v}:{a}] is {}x{}, expected {dim}x{dim}",
                        p.rows(),
                        p.cols()
                    )));
                }
            }
        }
        Ok(QuantumColoring {
            c,
            r,
            n_vertices: projectors.len(),
            storage: Storage::Dense(projectors),
        })
    }

    pub fn n_colors(&self) -> usize {
        self.c
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.r * self.c
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.storage, Storage::Hadamard { .. })
    }

    pub fn projector(&self, v: usize, a: usize) -> CMat {
        match &self.storage {
            Storage::Dense(ps) => ps[v][a].clone(),
            Storage::Hadamard { .. } => self.exact_ket(v, a).expect("exact storage").to_ket().projector(),
        }
    }

    /// The exact ket of `P^v_a` for Hadamard colourings.
    pub fn exact_ket(&self, v: usize, a: usize) -> Option<ExactKet> {
        match self.storage {
            Storage::Hadamard { n } => Some(hadamard_ket(n, v as u64, a)),
            Storage::Dense(_) => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut projectors = BTreeMap::new();
        for v in 0..self.n_vertices {
            for a in 0..self.c {
                projectors.insert(format!("{v}:{a}"), encode_entries(&self.projector(v, a)));
            }
        }
        let file = ColoringFile {
            c: self.c,
            r: self.r,
            projectors,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ColoringFile = serde_json::from_str(text)?;
        let mut slots: BTreeMap<(usize, usize), CMat> = BTreeMap::new();
        for (key, entries) in &file.projectors {
            let (v, a) = key
                .split_once(':')
                .and_then(|(v, a)| Some((v.trim().parse().ok()?, a.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("projector key {key:?} is not 'v:alpha'")))?;
            if a >= file.c {
                return Err(Error::Parse(format!("colour {a} out of range in key {key:?}")));
            }
            slots.insert((v, a), decode_square(entries)?);
        }
        let n_vertices = slots.keys().map(|&(v, _)| v + 1).max().unwrap_or(0);
        let mut projectors = Vec::with_capacity(n_vertices);
        for v in 0..n_vertices {
            let mut row = Vec::with_capacity(file.c);
            for a in 0..file.c {
                row.push(
                    slots
                        .remove(&(v, a))
                        .ok_or_else(|| Error::Parse(format!("missing projector {v}:{a}")))?,
                );
            }
            projectors.push(row);
        }
        QuantumColoring::new(file.c, file.r, projectors)
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringFile {
    c: usize,
    r: usize,
    projectors: BTreeMap<String, Vec<[f64; 2]>>,
}

fn hadamard_ket(n: usize, u: u64, a: usize) -> ExactKet {
    // -1 needs an even root-of-unity order
    let order = if n.is_multiple_of(2) { n } else { 2 * n };
    let step = order / n;
    let exps = (0..n)
        .map(|j| {
            let sign = if u >> j & 1 == 1 { order / 2 } else { 0 };
            Some(((step * a * j + sign) % order) as u32)
        })
        .collect();
    ExactKet::new(order as u32, exps).expect("nonzero ket")
}

/// The rank-1 `n`-colouring of the Hadamard graph `Omega_n`.
pub fn hadamard_coloring(n: usize) -> Result<QuantumColoring> {
    if n == 0 {
        return Err(Error::Invalid("Hadamard colouring needs n >= 1".into()));
    }
    if n > HADAMARD_COLORING_MAX {
        return Err(Error::budget("Hadamard colouring length", HADAMARD_COLORING_MAX, n));
    }
    Ok(QuantumColoring {
        c: n,
        r: 1,
        n_vertices: 1 << n,
        storage: Storage::Hadamard { n },
    })
}

/// `P^v_i = |i + col(v)><i + col(v)|` (indices mod `c`).
pub fn from_classical(g: &Graph, coloring: &[usize], c: usize) -> Result<QuantumColoring> {
    if c == 0 {
        return Err(Error::pre("colour count must be positive"));
    }
    if !is_proper_coloring(g, coloring, c) {
        return Err(Error::pre(format!("not a proper {c}-colouring of the graph")));
    }
    let projectors = coloring
        .iter()
        .map(|&col| (0..c).map(|i| crate::linalg::Ket::basis(c, (i + col) % c).projector()).collect())
        .collect();
    QuantumColoring::new(c, 1, projectors)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotProjector { vertex: usize, color: usize },
    Rank { vertex: usize, color: usize, trace: f64 },
    Completeness { vertex: usize, defect: f64 },
    Orthogonality { v: usize, w: usize, color: usize, trace: f64 },
}

impl Violation {
    fn key(&self) -> (usize, usize, usize, u8) {
        match *self {
            Violation::NotProjector { vertex, color } => (vertex, vertex, color, 0),
            Violation::Rank { vertex, color, .. } => (vertex, vertex, color, 1),
            Violation::Completeness { vertex, .. } => (vertex, vertex, 0, 2),
            Violation::Orthogonality { v, w, color, .. } => (v, w, color, 3),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalFormReport {
    pub n_colors: usize,
    pub rank: usize,
    pub dim: usize,
    pub vertices_checked: usize,
    pub edges_checked: usize,
    pub exact: bool,
    pub violations: Vec<Violation>,
    pub flags: Vec<String>,
    pub tolerance: TolerancePolicy,
}

impl NormalFormReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn vertex_violations(qc: &QuantumColoring, v: usize, tol: &TolerancePolicy) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    if let Some(kets) = (0..qc.c).map(|a| qc.exact_ket(v, a)).collect::<Option<Vec<_>>>() {
        // unit kets: rank 1 and projector by construction; n pairwise
        // orthogonal unit kets in dimension n resolve the identity
        let mut complete = kets.len() == qc.dim();
        for a in 0..kets.len() {
            for b in (a + 1)..kets.len() {
                if !kets[a].is_orthogonal(&kets[b])? {
                    complete = false;
                }
            }
        }
        if !complete {
            let sum = (0..qc.c).fold(CMat::zeros(qc.dim(), qc.dim()), |acc, a| &acc + &qc.projector(v, a));
            let defect = sum.max_abs_diff(&CMat::identity(qc.dim()))?;
            out.push(Violation::Completeness { vertex: v, defect });
        }
        return Ok(out);
    }
    let mut sum = CMat::zeros(qc.dim(), qc.dim());
    for a in 0..qc.c {
        let p = qc.projector(v, a);
        if !linalg::is_projector(&p, tol)? {
            out.push(Violation::NotProjector { vertex: v, color: a });
        }
        let tr = p.trace().re;
        if !tol.is_zero(tr - qc.r as f64, "projector rank")? {
            out.push(Violation::Rank {
                vertex: v,
                color: a,
                trace: tr,
            });
        }
        sum.add_assign_checked(&p)?;
    }
    let defect = sum.max_abs_diff(&CMat::identity(qc.dim()))?;
    if !tol.is_zero(defect, "measurement completeness")? {
        out.push(Violation::Completeness { vertex: v, defect });
    }
    Ok(out)
}

fn edge_violations(qc: &QuantumColoring, v: usize, w: usize, tol: &TolerancePolicy) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for a in 0..qc.c {
        let (zero, trace) = match (qc.exact_ket(v, a), qc.exact_ket(w, a)) {
            (Some(x), Some(y)) => {
                let num = x.inner_numerator(&y)?;
                let z = num.to_complex() / (x.norm_sq() as f64 * y.norm_sq() as f64).sqrt();
                (num.is_zero(), z.norm_sqr())
            }
            _ => {
                let t = linalg::hs_inner(&qc.projector(v, a), &qc.projector(w, a))?.norm();
                (tol.is_zero(t, "edge trace condition")?, t)
            }
        };
        if !zero {
            out.push(Violation::Orthogonality { v, w, color: a, trace });
        }
    }
    Ok(out)
}

fn collect_sorted(chunks: Vec<Result<Vec<Violation>>>) -> Result<Vec<Violation>> {
    let mut all = Vec::new();
    for c in chunks {
        all.extend(c?);
    }
    all.sort_by_key(Violation::key);
    Ok(all)
}

/// Checks every vertex measurement and the trace condition on every edge.
pub fn verify_normal_form(g: &Graph, qc: &QuantumColoring, tol: &TolerancePolicy) -> Result<NormalFormReport> {
    if qc.n_vertices() != g.n_vertices() {
        return Err(Error::dim(format!(
            "colouring covers {} vertices, graph has {}",
            qc.n_vertices(),
            g.n_vertices()
        )));
    }
    let per_vertex: Vec<_> = (0..g.n_vertices())
        .into_par_iter()
        .map(|v| vertex_violations(qc, v, tol))
        .collect();
    let edges = g.edges();
    let per_edge: Vec<_> = edges
        .par_iter()
        .map(|&(v, w)| edge_violations(qc, v, w, tol))
        .collect();
    let mut violations = collect_sorted(per_vertex)?;
    violations.extend(collect_sorted(per_edge)?);
    violations.sort_by_key(Violation::key);
    let mut flags = Vec::new();
    if edges.is_empty() {
        flags.push("edgeless graph: every measurement is a valid colouring".to_string());
    }
    if let Storage::Hadamard { n } = qc.storage {
        if n % 2 == 1 {
            flags.push(format!("odd n = {n}: the Hadamard graph is edgeless"));
        }
    }
    Ok(NormalFormReport {
        n_colors: qc.c,
        rank: qc.r,
        dim: qc.dim(),
        vertices_checked: g.n_vertices(),
        edges_checked: edges.len(),
        exact: qc.is_exact(),
        violations,
        flags,
        tolerance: *tol,
    })
}

/// Verifies `hadamard_coloring(n)` against `Omega_n` without materialising
/// the graph: every vertex measurement is checked, plus `samples` edges
/// drawn uniformly (uniform `u`, then a uniform set of `n/2` flipped signs).
pub fn verify_hadamard_sampled(n: usize, samples: usize, seed: u64) -> Result<NormalFormReport> {
    let qc = hadamard_coloring(n)?;
    let tol = TolerancePolicy::default();
    let nv = qc.n_vertices();
    let per_vertex: Vec<_> = (0..nv).into_par_iter().map(|v| vertex_violations(&qc, v, &tol)).collect();
    let mut violations = collect_sorted(per_vertex)?;
    let mut flags = Vec::new();
    let mut edges = Vec::new();
    if n % 2 == 1 {
        flags.push(format!("odd n = {n}: the Hadamard graph is edgeless"));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions: Vec<usize> = (0..n).collect();
        for _ in 0..samples {
            let u: usize = rng.gen_range(0..nv);
            let flips = rand::seq::index::sample(&mut rng, positions.len(), n / 2);
            let w = flips.iter().fold(u, |acc, j| acc ^ (1 << j));
            if hadamard_inner(n, u, w) != 0 {
                return Err(Error::Integrity("sampled pair is not an edge".into()));
            }
            edges.push((u, w));
        }
        let per_edge: Vec<_> = edges
            .par_iter()
            .map(|&(v, w)| edge_violations(&qc, v, w, &tol))
            .collect();
        violations.extend(collect_sorted(per_edge)?);
    }
    flags.push(format!("{} sampled edges (seed {seed})", edges.len()));
    Ok(NormalFormReport {
        n_colors: qc.c,
        rank: 1,
        dim: n,
        vertices_checked: nv,
        edges_checked: edges.len(),
        exact: true,
        violations,
        flags,
        tolerance: tol,
    })
}

#[derive(Debug, Clone)]
pub enum KsOutcome {
    /// A marking function exists; it induces this proper colouring.
    Classical { coloring: Vec<usize> },
    /// No marking function: the union of the projectors is projective KS.
    KsSet {
        set: OperatorSet,
        verdict: KsVerdict,
        /// `slots[v][a]` is the index of `P^v_a` in `set`.
        slots: Vec<Vec<usize>>,
    },
}

/// Decides whether the projectors of `qc` form a projective KS set under
/// the per-vertex measurements, and extracts a classical colouring via
/// `col(v) = a` iff `P^v_a` is marked when they do not.
pub fn ks_characterization(g: &Graph, qc: &QuantumColoring, tol: &TolerancePolicy) -> Result<KsOutcome> {
    let report = verify_normal_form(g, qc, tol)?;
    if !report.is_valid() {
        return Err(Error::pre(format!(
            "colouring is not in normal form ({} violations)",
            report.violations.len()
        )));
    }
    let mut union: Vec<CMat> = Vec::new();
    let mut slots = vec![vec![0; qc.c]; g.n_vertices()];
    for (v, row) in slots.iter_mut().enumerate() {
        for (a, slot) in row.iter_mut().enumerate() {
            let p = qc.projector(v, a);
            let mut found = None;
            for (i, q) in union.iter().enumerate() {
                if linalg::approx_eq(q, &p, tol)? {
                    found = Some(i);
                    break;
                }
            }
            *slot = match found {
                Some(i) => i,
                None => {
                    union.push(p);
                    union.len() - 1
                }
            };
        }
    }
    let elements = union
        .into_iter()
        .enumerate()
        .map(|(i, matrix)| Element {
            label: format!("P{i}"),
            matrix,
            ket: None,
        })
        .collect();
    let set = OperatorSet::dedup_from(qc.dim(), SetKind::Projectors, elements, *tol)?;
    if set.len() != slots.iter().flatten().max().map_or(0, |m| m + 1) {
        return Err(Error::Integrity("projector de-duplication is not transitive".into()));
    }
    let mut subsets: Vec<Vec<usize>> = slots
        .iter()
        .map(|row| {
            let mut s = row.clone();
            s.sort_unstable();
            s
        })
        .collect();
    subsets.sort();
    subsets.dedup();
    let verdict = classify_with_cover(&set, MeasurementCover { subsets })?;
    match verdict.marking() {
        Some(m) => {
            let mut coloring = Vec::with_capacity(g.n_vertices());
            for (v, row) in slots.iter().enumerate() {
                let marked: Vec<usize> = (0..qc.c).filter(|&a| m.is_marked(row[a])).collect();
                if marked.len() != 1 {
                    return Err(Error::Integrity(format!("vertex {v} has {} marked colours", marked.len())));
                }
                coloring.push(marked[0]);
            }
            if !is_proper_coloring(g, &coloring, qc.c) {
                return Err(Error::Integrity("extracted colouring is not proper".into()));
            }
            Ok(KsOutcome::Classical { coloring })
        }
        None => Ok(KsOutcome::KsSet { set, verdict, slots }),
    }
}
