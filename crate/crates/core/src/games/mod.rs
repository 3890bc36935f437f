//! Two-player nonlocal games: construction from KS sets and graph
//! colourings, quantum strategy checking, and exact classical values.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::QuantumColoring;
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::ks::{classify, validate_marking, Forbid, MarkingAssignment, MeasurementCover, OperatorSet};
use crate::linalg::{self, CMat, TolerancePolicy};

/// Largest number of one-sided deterministic strategies enumerated.
pub const CLASSICAL_ENUMERATION_MAX: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlocalGame {
    pub inputs_a: Vec<String>,
    pub inputs_b: Vec<String>,
    pub answers_a: Vec<String>,
    pub answers_b: Vec<String>,
    /// `pi[x][y]`
    pub pi: Vec<Vec<f64>>,
    /// `v[x][y][a][b]`
    pub v: Vec<Vec<Vec<Vec<bool>>>>,
}

impl NonlocalGame {
    pub fn validate(&self) -> Result<()> {
        let (nx, ny, na, nb) = self.shape();
        if self.pi.len() != nx || self.pi.iter().any(|r| r.len() != ny) {
            return Err(Error::dim("pi must be |X| x |Y|"));
        }
        if self.pi.iter().flatten().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::Invalid("pi has a negative or non-finite entry".into()));
        }
        let total: f64 = self.pi.iter().flatten().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("pi sums to {total}")));
        }
        let full = self.v.len() == nx
            && self.v.iter().all(|r| {
                r.len() == ny && r.iter().all(|t| t.len() == na && t.iter().all(|u| u.len() == nb))
            });
        if !full {
            return Err(Error::dim("V must be fully populated as |X| x |Y| x |A| x |B|"));
        }
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize, usize, usize) {
        (self.inputs_a.len(), self.inputs_b.len(), self.answers_a.len(), self.answers_b.len())
    }

    pub fn wins(&self, a: usize, b: usize, x: usize, y: usize) -> bool {
        self.v[x][y][a][b]
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let g: NonlocalGame = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Winning probability of a deterministic strategy.
    pub fn score(&self, s: &DeterministicStrategy) -> f64 {
        let (nx, ny, _, _) = self.shape();
        let mut total = 0.0;
        for x in 0..nx {
            for y in 0..ny {
                if self.wins(s.s_a[x], s.s_b[y], x, y) {
                    total += self.pi[x][y];
                }
            }
        }
        total
    }

    /// Tuples `(x, y, a, b)` with `pi(x, y) > 0` that `s` loses.
    pub fn losing_tuples(&self, s: &DeterministicStrategy) -> Vec<(usize, usize, usize, usize)> {
        let (nx, ny, _, _) = self.shape();
        let mut out = Vec::new();
        for x in 0..nx {
            for y in 0..ny {
                let (a, b) = (s.s_a[x], s.s_b[y]);
                if self.pi[x][y] > 0.0 && !self.wins(a, b, x, y) {
                    out.push((x, y, a, b));
                }
            }
        }
        out
    }

    /// True when every diagonal input pair is asked and only equal answers
    /// win there, so a perfect strategy must have `s_A = s_B`.
    pub fn forces_equal_answers(&self) -> bool {
        let (nx, ny, na, nb) = self.shape();
        nx == ny
            && na == nb
            && (0..nx).all(|x| {
                self.pi[x][x] > 0.0 && (0..na).all(|a| (0..nb).all(|b| a == b || !self.wins(a, b, x, x)))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub s_a: Vec<usize>,
    pub s_b: Vec<usize>,
}

/// Projective measurements on the maximally entangled state of `local_dim`.
/// `alice[x][a]` is `P^x_a`; answers past the end of `alice[x]` have
/// probability zero. Likewise for Bob.
#[derive(Debug, Clone)]
pub struct GameQuantumStrategy {
    pub local_dim: usize,
    pub alice: Vec<Vec<CMat>>,
    pub bob: Vec<Vec<CMat>>,
}

impl GameQuantumStrategy {
    /// `<Psi| P (x) Q |Psi> = Tr(P Q^T) / d`.
    pub fn prob(&self, a: usize, b: usize, x: usize, y: usize) -> Result<f64> {
        let (Some(p), Some(q)) = (self.alice[x].get(a), self.bob[y].get(b)) else {
            return Ok(0.0);
        };
        let t = p.matmul(&q.transpose())?.trace();
        Ok(t.re / self.local_dim as f64)
    }
}

/// The pseudo-telepathy game of a projective KS set: each player receives a
/// measurement index and answers with an element of it; answers win iff the
/// two projectors are not trace-orthogonal. The quantum strategy measures
/// `S_x` for Alice and the entry-wise conjugate of `S_y` for Bob.
pub fn game_from_ks(set: &OperatorSet) -> Result<(NonlocalGame, GameQuantumStrategy, MeasurementCover)> {
    let verdict = classify(set)?;
    if !verdict.classification.is_ks() {
        return Err(Error::pre("input set admits a marking function; it is not KS"));
    }
    let (g, q) = game_from_cover(set, &verdict.cover)?;
    Ok((g, q, verdict.cover))
}

/// The same construction for any cover, without the KS check.
pub fn game_from_cover(set: &OperatorSet, cover: &MeasurementCover) -> Result<(NonlocalGame, GameQuantumStrategy)> {
    if cover.is_empty() {
        return Err(Error::pre("game needs at least one measurement"));
    }
    let tol = set.tolerance();
    let k = cover.len();
    let width = cover.subsets.iter().map(Vec::len).max().unwrap_or(0);
    let mut v = vec![vec![vec![vec![false; width]; width]; k]; k];
    for x in 0..k {
        for y in 0..k {
            for (a, &ea) in cover.subsets[x].iter().enumerate() {
                for (b, &eb) in cover.subsets[y].iter().enumerate() {
                    v[x][y][a][b] = !linalg::trace_orthogonal(set.matrix(ea), set.matrix(eb), tol)?;
                }
            }
        }
    }
    let inputs: Vec<String> = (0..k).map(|i| format!("S{i}")).collect();
    let answers: Vec<String> = (0..width).map(|a| a.to_string()).collect();
    let game = NonlocalGame {
        inputs_a: inputs.clone(),
        inputs_b: inputs,
        answers_a: answers.clone(),
        answers_b: answers,
        pi: vec![vec![1.0 / (k * k) as f64; k]; k],
        v,
    };
    let alice: Vec<Vec<CMat>> = cover
        .subsets
        .iter()
        .map(|s| s.iter().map(|&e| set.matrix(e).clone()).collect())
        .collect();
    let bob = alice.iter().map(|m| m.iter().map(CMat::conj).collect()).collect();
    Ok((
        game,
        GameQuantumStrategy {
            local_dim: set.dim(),
            alice,
            bob,
        },
    ))
}

/// Graph colouring game: equal vertices need equal colours, adjacent
/// vertices different ones. Questions are uniform over the diagonal and
/// both orientations of every edge.
pub fn coloring_game(g: &Graph, c: usize) -> Result<NonlocalGame> {
    if c == 0 {
        return Err(Error::pre("colouring game needs at least one colour"));
    }
    let n = g.n_vertices();
    if n == 0 {
        return Err(Error::pre("colouring game needs at least one vertex"));
    }
    let asked = (n + 2 * g.n_edges()) as f64;
    let mut pi = vec![vec![0.0; n]; n];
    let mut v = vec![vec![vec![vec![true; c]; c]; n]; n];
    for x in 0..n {
        for y in 0..n {
            if x == y {
                pi[x][y] = 1.0 / asked;
                for a in 0..c {
                    for b in 0..c {
                        v[x][y][a][b] = a == b;
                    }
                }
            } else if g.adjacent(x, y) {
                pi[x][y] = 1.0 / asked;
                for a in 0..c {
                    v[x][y][a][a] = false;
                }
            }
        }
    }
    let inputs: Vec<String> = (0..n).map(|x| x.to_string()).collect();
    let answers: Vec<String> = (0..c).map(|a| a.to_string()).collect();
    Ok(NonlocalGame {
        inputs_a: inputs.clone(),
        inputs_b: inputs,
        answers_a: answers.clone(),
        answers_b: answers,
        pi,
        v,
    })
}

/// Alice measures `{P^v_a}`, Bob the conjugates.
pub fn coloring_strategy(qc: &QuantumColoring) -> GameQuantumStrategy {
    let alice: Vec<Vec<CMat>> = (0..qc.n_vertices())
        .map(|v| (0..qc.n_colors()).map(|a| qc.projector(v, a)).collect())
        .collect();
    let bob = alice.iter().map(|m| m.iter().map(CMat::conj).collect()).collect();
    GameQuantumStrategy {
        local_dim: qc.dim(),
        alice,
        bob,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LosingFlag {
    pub x: usize,
    pub y: usize,
    pub a: usize,
    pub b: usize,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawViolation {
    pub x: usize,
    pub y: usize,
    pub total: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantumReport {
    pub flags: Vec<LosingFlag>,
    pub law_violations: Vec<LawViolation>,
    pub tuples_checked: usize,
    pub tolerance: TolerancePolicy,
}

impl QuantumReport {
    pub fn never_loses(&self) -> bool {
        self.flags.is_empty() && self.law_violations.is_empty()
    }
}

/// Flags every asked `(x, y)` and answer pair with positive probability
/// that loses, and every `(x, y)` whose outcome distribution does not sum
/// to one.
pub fn quantum_loses_probability_zero(
    game: &NonlocalGame,
    qs: &GameQuantumStrategy,
    tol: &TolerancePolicy,
) -> Result<QuantumReport> {
    let (nx, ny, na, nb) = game.shape();
    if qs.alice.len() != nx || qs.bob.len() != ny {
        return Err(Error::dim("strategy inputs do not match the game"));
    }
    if qs.alice.iter().any(|m| m.len() > na) || qs.bob.iter().any(|m| m.len() > nb) {
        return Err(Error::dim("strategy has more outcomes than the game has answers"));
    }
    let d = qs.local_dim;
    if qs.alice.iter().chain(&qs.bob).flatten().any(|p| p.rows() != d || p.cols() != d) {
        return Err(Error::dim(format!("strategy operators must be {d}x{d}")));
    }
    let cells: Vec<(usize, usize)> = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).collect();
    let per_cell: Vec<Result<(usize, Vec<LosingFlag>, Option<LawViolation>)>> = cells
        .par_iter()
        .map(|&(x, y)| {
            let mut flags = Vec::new();
            let mut total = 0.0;
            let mut count = 0;
            for a in 0..qs.alice[x].len() {
                for b in 0..qs.bob[y].len() {
                    let p = qs.prob(a, b, x, y)?;
                    total += p;
                    if game.pi[x][y] > 0.0 {
                        count += 1;
                        if !game.wins(a, b, x, y) && !tol.is_zero(p.abs(), "losing probability")? {
                            flags.push(LosingFlag { x, y, a, b, prob: p });
                        }
                    }
                }
            }
            let law = (!tol.is_zero((total - 1.0).abs(), "probability normalisation")?)
                .then_some(LawViolation { x, y, total });
            Ok((count, flags, law))
        })
        .collect();
    let mut report = QuantumReport {
        flags: Vec::new(),
        law_violations: Vec::new(),
        tuples_checked: 0,
        tolerance: *tol,
    };
    for r in per_cell {
        let (c, f, l) = r?;
        report.tuples_checked += c;
        report.flags.extend(f);
        report.law_violations.extend(l);
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalValue {
    pub value: f64,
    pub strategy: DeterministicStrategy,
    pub losing: Vec<(usize, usize, usize, usize)>,
    /// Strategies of the enumerated side.
    pub enumerated: u64,
}

fn decode(mut code: u64, base: usize, len: usize) -> Vec<usize> {
    // position 0 is the most significant digit, so numeric order is
    // lexicographic order
    let mut out = vec![0; len];
    for i in (0..len).rev() {
        out[i] = (code % base as u64) as usize;
        code /= base as u64;
    }
    out
}

/// Exact classical value: enumerate all deterministic strategies of the
/// side with fewer of them and best-respond input by input on the other.
/// Ties go to the lexicographically smallest strategy.
pub fn classical_value(game: &NonlocalGame) -> Result<ClassicalValue> {
    classical_value_with_budget(game, CLASSICAL_ENUMERATION_MAX)
}

pub fn classical_value_with_budget(game: &NonlocalGame, budget: u64) -> Result<ClassicalValue> {
    game.validate()?;
    let (nx, ny, na, nb) = game.shape();
    if na == 0 || nb == 0 {
        return Err(Error::Invalid("game has an empty answer set".into()));
    }
    let count = |base: usize, len: usize| (base as u64).checked_pow(len as u32).unwrap_or(u64::MAX);
    let (sa, sb) = (count(na, nx), count(nb, ny));
    let alice_side = sa <= sb;
    let space = sa.min(sb);
    if space > budget {
        return Err(Error::budget(
            "deterministic strategies to enumerate",
            budget as usize,
            space.min(usize::MAX as u64) as usize,
        ));
    }
    // best response of the free side for a fixed strategy of the enumerated side
    let respond = |fixed: &[usize]| -> (f64, Vec<usize>) {
        let (n_free, n_ans, n_fixed) = if alice_side { (ny, nb, nx) } else { (nx, na, ny) };
        let mut total = 0.0;
        let mut reply = Vec::with_capacity(n_free);
        for f in 0..n_free {
            let mut best = (f64::NEG_INFINITY, 0);
            for ans in 0..n_ans {
                let mut s = 0.0;
                for (o, &fa) in fixed.iter().enumerate().take(n_fixed) {
                    let (x, y, a, b) = if alice_side { (o, f, fa, ans) } else { (f, o, ans, fa) };
                    if game.wins(a, b, x, y) {
                        s += game.pi[x][y];
                    }
                }
                if s > best.0 + 1e-12 {
                    best = (s, ans);
                }
            }
            total += best.0;
            reply.push(best.1);
        }
        (total, reply)
    };
    let (base, len) = if alice_side { (na, nx) } else { (nb, ny) };
    let chunk = 4096u64;
    let n_chunks = space.div_ceil(chunk);
    let best_per_chunk: Vec<(f64, u64)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut best = (f64::NEG_INFINITY, 0);
            for code in c * chunk..((c + 1) * chunk).min(space) {
                let (v, _) = respond(&decode(code, base, len));
                if v > best.0 + 1e-12 {
                    best = (v, code);
                }
            }
            best
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, 0);
    for b in best_per_chunk {
        if b.0 > best.0 + 1e-12 {
            best = b;
        }
    }
    let fixed = decode(best.1, base, len);
    let (_, reply) = respond(&fixed);
    let strategy = if alice_side {
        DeterministicStrategy { s_a: fixed, s_b: reply }
    } else {
        DeterministicStrategy { s_a: reply, s_b: fixed }
    };
    Ok(ClassicalValue {
        value: game.score(&strategy),
        losing: game.losing_tuples(&strategy),
        strategy,
        enumerated: space,
    })
}

/// Searches for a perfect deterministic strategy with `s_A = s_B` by
/// backtracking; only meaningful when [`NonlocalGame::forces_equal_answers`]
/// holds, in which case it decides whether the classical value is 1.
pub fn perfect_symmetric_strategy(game: &NonlocalGame) -> Result<Option<DeterministicStrategy>> {
    game.validate()?;
    if !game.forces_equal_answers() {
        return Err(Error::pre("game does not force s_A = s_B"));
    }
    let (n, _, na, _) = game.shape();
    fn extend(game: &NonlocalGame, s: &mut Vec<usize>, n: usize, na: usize) -> bool {
        let x = s.len();
        if x == n {
            return true;
        }
        for a in 0..na {
            let ok = game.wins(a, a, x, x)
                && (0..x).all(|y| {
                    (game.pi[x][y] <= 0.0 || game.wins(a, s[y], x, y))
                        && (game.pi[y][x] <= 0.0 || game.wins(s[y], a, y, x))
                });
            if ok {
                s.push(a);
                if extend(game, s, n, na) {
                    return true;
                }
                s.pop();
            }
        }
        false
    }
    let mut s = Vec::with_capacity(n);
    Ok(extend(game, &mut s, n, na).then(|| DeterministicStrategy {
        s_a: s.clone(),
        s_b: s,
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudoTelepathyReport {
    pub quantum: QuantumReport,
    /// `None` when only the perfect-strategy search was affordable.
    pub classical: Option<ClassicalValue>,
    pub perfect_classical_exists: bool,
    pub is_pseudo_telepathy: bool,
}

/// The quantum strategy never loses and no deterministic strategy wins
/// with certainty.
pub fn is_pseudo_telepathy(
    game: &NonlocalGame,
    qs: &GameQuantumStrategy,
    tol: &TolerancePolicy,
) -> Result<PseudoTelepathyReport> {
    let quantum = quantum_loses_probability_zero(game, qs, tol)?;
    let (classical, perfect) = match classical_value(game) {
        Ok(cv) => {
            let perfect = cv.losing.is_empty();
            (Some(cv), perfect)
        }
        Err(Error::Budget { .. }) if game.forces_equal_answers() => (None, perfect_symmetric_strategy(game)?.is_some()),
        Err(e) => return Err(e),
    };
    Ok(PseudoTelepathyReport {
        is_pseudo_telepathy: quantum.never_loses() && !perfect,
        quantum,
        classical,
        perfect_classical_exists: perfect,
    })
}

/// Reads a deterministic strategy of a KS game as a marking function:
/// `f(P^x_a) = 1` iff `s_A(x) = a`. Fails when the strategy is inconsistent
/// (an element answered in one measurement but not in another containing it).
pub fn marking_from_strategy(
    set: &OperatorSet,
    cover: &MeasurementCover,
    s: &DeterministicStrategy,
) -> Result<std::result::Result<MarkingAssignment, String>> {
    if s.s_a.len() != cover.len() {
        return Err(Error::dim("strategy does not match the cover"));
    }
    let mut values = vec![0u8; set.len()];
    for (x, subset) in cover.subsets.iter().enumerate() {
        match subset.get(s.s_a[x]) {
            Some(&e) => values[e] = 1,
            None => return Ok(Err(format!("answer {} is outside measurement {x}", s.s_a[x]))),
        }
    }
    let m = MarkingAssignment { values };
    Ok(validate_marking(set, cover, Forbid::OrthogonalPair, &m)?.map(|()| m))
}
