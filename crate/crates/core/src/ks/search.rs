use crate::error::{Error, Result};
use crate::ks::{Forbid, MarkingAssignment, MeasurementCover, OperatorSet, SetKind};
use crate::linalg::{self, CMat};

pub const DEFAULT_ENUMERATION_CAP: usize = 40;

pub fn enumerate_measurements(set: &OperatorSet) -> Result<MeasurementCover> {
    enumerate_measurements_with_cap(set, DEFAULT_ENUMERATION_CAP)
}

/// Depth-first search for every subset summing to the identity.
///
/// Branches are cut when the running trace exceeds the dimension, when a
/// running diagonal entry exceeds one, or (for projectors) when a candidate
/// is not trace-orthogonal to the subset so far.
pub fn enumerate_measurements_with_cap(set: &OperatorSet, cap: usize) -> Result<MeasurementCover> {
    if set.len() > cap {
        return Err(Error::budget("operator set size for measurement enumeration", cap, set.len()));
    }
    let tol = *set.tolerance();
    let n = set.dim();
    let n_el = set.len();
    let traces: Vec<f64> = set.elements().iter().map(|e| e.matrix.trace().re).collect();
    let diags: Vec<Vec<f64>> = set
        .elements()
        .iter()
        .map(|e| (0..n).map(|i| e.matrix[(i, i)].re).collect())
        .collect();
    let projective = set.kind() != SetKind::Psd;
    let ortho = if projective {
        Some(orthogonality_table(set)?)
    } else {
        None
    };

    struct Dfs<'a> {
        set: &'a OperatorSet,
        n: usize,
        traces: &'a [f64],
        diags: &'a [Vec<f64>],
        ortho: Option<&'a [Vec<bool>]>,
        slack: f64,
        found: Vec<Vec<usize>>,
        current: Vec<usize>,
        trace: f64,
        diag: Vec<f64>,
    }

    impl Dfs<'_> {
        fn run(&mut self, start: usize) -> Result<()> {
            let target = self.n as f64;
            if (self.trace - target).abs() <= self.slack {
                let ops: Vec<CMat> = self.current.iter().map(|&i| self.set.matrix(i).clone()).collect();
                if linalg::sums_to_identity(&ops, self.set.tolerance())? {
                    self.found.push(self.current.clone());
                }
                return Ok(());
            }
            for e in start..self.traces.len() {
                if self.trace + self.traces[e] > target + self.slack {
                    continue;
                }
                if self.diag.iter().zip(&self.diags[e]).any(|(a, b)| a + b > 1.0 + self.slack) {
                    continue;
                }
                if let Some(o) = self.ortho {
                    if self.current.iter().any(|&c| !o[c][e]) {
                        continue;
                    }
                }
                self.current.push(e);
                self.trace += self.traces[e];
                for (a, b) in self.diag.iter_mut().zip(&self.diags[e]) {
                    *a += b;
                }
                self.run(e + 1)?;
                self.current.pop();
                self.trace -= self.traces[e];
                for (a, b) in self.diag.iter_mut().zip(&self.diags[e]) {
                    *a -= b;
                }
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        set,
        n,
        traces: &traces,
        diags: &diags,
        ortho: ortho.as_deref(),
        // generous slack on the pruning bounds; the final identity test is exact to zero_tol
        slack: tol.upper() * n.max(1) as f64,
        found: Vec::new(),
        current: Vec::new(),
        trace: 0.0,
        diag: vec![0.0; n],
    };
    if n_el > 0 {
        dfs.run(0)?;
    }
    let mut subsets = dfs.found;
    subsets.sort();
    Ok(MeasurementCover { subsets })
}

/// `table[i][j]` is `Tr(P_i P_j) = 0`.
pub fn orthogonality_table(set: &OperatorSet) -> Result<Vec<Vec<bool>>> {
    let n = set.len();
    let tol = set.tolerance();
    let mut table = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let o = linalg::trace_orthogonal(set.matrix(i), set.matrix(j), tol)?;
            table[i][j] = o;
            table[j][i] = o;
        }
    }
    Ok(table)
}

fn forbidden_pairs(set: &OperatorSet, forbid: Forbid) -> Result<Vec<Vec<usize>>> {
    let n = set.len();
    let tol = set.tolerance();
    let mut conflicts = vec![Vec::new(); n];
    match forbid {
        Forbid::None => {}
        Forbid::OrthogonalPair => {
            let t = orthogonality_table(set)?;
            for i in 0..n {
                for j in 0..n {
                    if t[i][j] {
                        conflicts[i].push(j);
                    }
                }
            }
        }
        Forbid::SubidentityPair => {
            let id = CMat::identity(set.dim());
            for i in 0..n {
                for j in (i + 1)..n {
                    let sum = set.matrix(i).try_add(set.matrix(j))?;
                    if linalg::psd_leq(&sum, &id, tol)? {
                        conflicts[i].push(j);
                        conflicts[j].push(i);
                    }
                }
            }
            for c in conflicts.iter_mut() {
                c.sort_unstable();
            }
        }
    }
    Ok(conflicts)
}

#[derive(Debug, Clone)]
pub struct MarkingSearch {
    pub assignment: Option<MarkingAssignment>,
    pub nodes_visited: u64,
    pub search_space: u64,
}

pub fn search_marking(set: &OperatorSet, cover: &MeasurementCover, forbid: Forbid) -> Result<Option<MarkingAssignment>> {
    Ok(search_marking_with_stats(set, cover, forbid)?.assignment)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Unknown,
    Zero,
    One,
}

struct Solver<'a> {
    subsets: &'a [Vec<usize>],
    membership: Vec<Vec<usize>>,
    conflicts: Vec<Vec<usize>>,
    marks: Vec<Mark>,
    trail: Vec<usize>,
    nodes: u64,
}

impl Solver<'_> {
    fn assign(&mut self, e: usize, m: Mark) -> bool {
        match self.marks[e] {
            Mark::Unknown => {
                self.marks[e] = m;
                self.trail.push(e);
                true
            }
            current => current == m,
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let e = self.trail.pop().unwrap();
            self.marks[e] = Mark::Unknown;
        }
    }

    /// Marks `e` and zeroes everything that then cannot be marked.
    fn mark(&mut self, e: usize) -> bool {
        if !self.assign(e, Mark::One) {
            return false;
        }
        for si in 0..self.membership[e].len() {
            let s = self.membership[e][si];
            for k in 0..self.subsets[s].len() {
                let other = self.subsets[s][k];
                if other != e && !self.assign(other, Mark::Zero) {
                    return false;
                }
            }
        }
        for ci in 0..self.conflicts[e].len() {
            let other = self.conflicts[e][ci];
            if !self.assign(other, Mark::Zero) {
                return false;
            }
        }
        true
    }

    /// Unsatisfied subset with the fewest open candidates, or `Ok(None)` if
    /// every subset already has its mark. `Err(())` on a dead end.
    fn pick_subset(&self) -> std::result::Result<Option<usize>, ()> {
        let mut best: Option<(usize, usize)> = None;
        for (i, s) in self.subsets.iter().enumerate() {
            let mut open = 0;
            let mut done = false;
            for &e in s {
                match self.marks[e] {
                    Mark::One => {
                        done = true;
                        break;
                    }
                    Mark::Unknown => open += 1,
                    Mark::Zero => {}
                }
            }
            if done {
                continue;
            }
            if open == 0 {
                return Err(());
            }
            if best.map_or(true, |(_, b)| open < b) {
                best = Some((i, open));
            }
        }
        Ok(best.map(|(i, _)| i))
    }

    fn solve(&mut self) -> bool {
        self.nodes += 1;
        let s = match self.pick_subset() {
            Err(()) => return false,
            Ok(None) => return true,
            Ok(Some(s)) => s,
        };
        let candidates: Vec<usize> = self.subsets[s]
            .iter()
            .copied()
            .filter(|&e| self.marks[e] == Mark::Unknown)
            .collect();
        for e in candidates {
            let save = self.trail.len();
            if self.mark(e) && self.solve() {
                return true;
            }
            self.undo_to(save);
        }
        false
    }
}

/// Backtracking search for a marking function on `cover`, rejecting
/// assignments that mark a forbidden pair.
///
/// Branches on the unsatisfied measurement with the fewest open
/// candidates and tries lower element indices first, so the returned
/// assignment is deterministic.
pub fn search_marking_with_stats(set: &OperatorSet, cover: &MeasurementCover, forbid: Forbid) -> Result<MarkingSearch> {
    if cover.is_empty() {
        return Err(Error::pre("marking search needs a nonempty cover"));
    }
    let n = set.len();
    for s in &cover.subsets {
        if s.iter().any(|&e| e >= n) {
            return Err(Error::Invalid(format!("cover references element outside 0..{n}")));
        }
    }
    let conflicts = forbidden_pairs(set, forbid)?;
    let search_space = cover
        .subsets
        .iter()
        .fold(1u64, |acc, s| acc.saturating_mul(s.len() as u64));
    let mut solver = Solver {
        subsets: &cover.subsets,
        membership: cover.memberships(n),
        conflicts,
        marks: vec![Mark::Unknown; n],
        trail: Vec::new(),
        nodes: 0,
    };
    let found = solver.solve();
    let assignment = found.then(|| MarkingAssignment {
        values: solver.marks.iter().map(|&m| u8::from(m == Mark::One)).collect(),
    });
    Ok(MarkingSearch {
        assignment,
        nodes_visited: solver.nodes,
        search_space,
    })
}

/// Independent re-check of a marking assignment: exactly one mark per
/// measurement, no forbidden pair marked. Returns a description of the
/// first violation.
pub fn validate_marking(
    set: &OperatorSet,
    cover: &MeasurementCover,
    forbid: Forbid,
    assignment: &MarkingAssignment,
) -> Result<std::result::Result<(), String>> {
    if assignment.values.len() != set.len() {
        return Ok(Err(format!(
            "assignment has {} values for {} elements",
            assignment.values.len(),
            set.len()
        )));
    }
    if assignment.values.iter().any(|&v| v > 1) {
        return Ok(Err("assignment values must be 0 or 1".into()));
    }
    for (i, s) in cover.subsets.iter().enumerate() {
        let count = s.iter().filter(|&&e| assignment.values[e] == 1).count();
        if count != 1 {
            return Ok(Err(format!("measurement {i} has {count} marked elements")));
        }
    }
    let marked: Vec<usize> = assignment.marked().collect();
    let tol = set.tolerance();
    let id = CMat::identity(set.dim());
    for (a, &i) in marked.iter().enumerate() {
        for &j in &marked[a + 1..] {
            let bad = match forbid {
                Forbid::None => false,
                Forbid::OrthogonalPair => linalg::trace_orthogonal(set.matrix(i), set.matrix(j), tol)?,
                Forbid::SubidentityPair => {
                    linalg::psd_leq(&set.matrix(i).try_add(set.matrix(j))?, &id, tol)?
                }
            };
            if bad {
                return Ok(Err(format!("forbidden pair ({i}, {j}) is marked")));
            }
        }
    }
    Ok(Ok(()))
}

/// Double-counting obstruction: if every element lies in an even number of
/// measurements and the number of measurements is odd, no marking function
/// exists (summing the marks per measurement gives an odd total, summing
/// per element an even one).
pub fn parity_obstruction(cover: &MeasurementCover, n_elements: usize) -> bool {
    if cover.len() % 2 == 0 {
        return false;
    }
    cover.memberships(n_elements).iter().all(|m| m.len() % 2 == 0)
}
