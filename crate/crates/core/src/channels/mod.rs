//! Classical channels, one-shot zero-error capacity and entanglement-assisted
//! strategies built from KS sets and quantum colourings.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{verify_normal_form, QuantumColoring};
use crate::error::{Error, Result};
use crate::graphs::{
    cartesian_product, independence_number_with_budget, orthogonality_graph, Graph, IndependenceResult,
    VertexLabel, DEFAULT_MIS_BUDGET,
};
use crate::ks::{classify, Element, KsVerdict, MeasurementCover, OperatorSet, SetKind};
use crate::linalg::json::{decode_square, encode_entries};
use crate::linalg::{self, bob_residual, CMat, TolerancePolicy};

const ROW_SUM_TOL: f64 = 1e-12;

/// `probs[x][y] = N(y|x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    inputs: Vec<String>,
    outputs: Vec<String>,
    probs: Vec<Vec<f64>>,
}

impl Channel {
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, probs: Vec<Vec<f64>>) -> Result<Self> {
        let ch = Channel { inputs, outputs, probs };
        ch.validate()?;
        Ok(ch)
    }

    fn validate(&self) -> Result<()> {
        if self.probs.len() != self.inputs.len() {
            return Err(Error::dim(format!(
                "{} probability rows for {} inputs",
                self.probs.len(),
                self.inputs.len()
            )));
        }
        for (x, row) in self.probs.iter().enumerate() {
            if row.len() != self.outputs.len() {
                return Err(Error::dim(format!("row {x} has {} entries, expected {}", row.len(), self.outputs.len())));
            }
            if row.iter().any(|&p| !p.is_finite() || p < 0.0) {
                return Err(Error::Invalid(format!("row {x} has a negative or non-finite entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::Invalid(format!("row {x} sums to {s}")));
            }
        }
        let mut seen = HashMap::new();
        for (i, x) in self.inputs.iter().enumerate() {
            if let Some(j) = seen.insert(x.as_str(), i) {
                return Err(Error::Invalid(format!("input label {x:?} repeated at {j} and {i}")));
            }
        }
        Ok(())
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x][y]
    }

    pub fn input_index(&self, label: &str) -> Option<usize> {
        self.inputs.iter().position(|x| x == label)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let ch: Channel = serde_json::from_str(text)?;
        ch.validate()?;
        Ok(ch)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Inputs are adjacent iff some output has positive probability under both.
pub fn confusability_graph(ch: &Channel) -> Graph {
    let n = ch.inputs.len();
    let mut g = Graph::empty(n);
    for y in 0..ch.outputs.len() {
        let support: Vec<usize> = (0..n).filter(|&x| ch.probs[x][y] > 0.0).collect();
        for (i, &a) in support.iter().enumerate() {
            for &b in &support[i + 1..] {
                g.add_edge(a, b).expect("distinct inputs in range");
            }
        }
    }
    g
}

/// Input `x` emits uniformly one of `x` itself and its incident edges, so the
/// confusability graph is `g` again.
pub fn canonical_channel(g: &Graph) -> Channel {
    let n = g.n_vertices();
    let edges = g.edges();
    let inputs: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let mut outputs = inputs.clone();
    outputs.extend(edges.iter().map(|(u, v)| format!("e{u}-{v}")));
    let mut probs = vec![vec![0.0; n + edges.len()]; n];
    for (x, row) in probs.iter_mut().enumerate() {
        row[x] = 1.0;
    }
    for (k, &(u, v)) in edges.iter().enumerate() {
        probs[u][n + k] = 1.0;
        probs[v][n + k] = 1.0;
    }
    for row in &mut probs {
        let s: f64 = row.iter().sum();
        for p in row.iter_mut() {
            *p /= s;
        }
    }
    Channel { inputs, outputs, probs }
}

/// One-shot zero-error capacity: the independence number of the
/// confusability graph, with a witness set of inputs.
pub fn c0(ch: &Channel) -> Result<IndependenceResult> {
    c0_with_budget(ch, DEFAULT_MIS_BUDGET)
}

pub fn c0_with_budget(ch: &Channel, max_vertices: usize) -> Result<IndependenceResult> {
    independence_number_with_budget(&confusability_graph(ch), max_vertices)
}

/// Alice's measurement for one message: `(input label, E^m_x)` pairs.
/// Inputs that are never sent are absent (their operator is zero).
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcomes: Vec<(String, CMat)>,
}

/// Entanglement-assisted strategy on the maximally entangled state of
/// `local_dim`: message `m` is sent by measuring `measurements[m]` and
/// feeding the outcome's input into the channel.
#[derive(Debug, Clone)]
pub struct EaStrategy {
    pub local_dim: usize,
    pub measurements: Vec<Measurement>,
}

#[derive(Serialize, Deserialize)]
struct StrategyFile {
    local_dim: usize,
    messages: Vec<Vec<OutcomeEntry>>,
}

#[derive(Serialize, Deserialize)]
struct OutcomeEntry {
    input: String,
    entries: Vec<[f64; 2]>,
}

impl EaStrategy {
    pub fn n_messages(&self) -> usize {
        self.measurements.len()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = StrategyFile {
            local_dim: self.local_dim,
            messages: self
                .measurements
                .iter()
                .map(|m| {
                    m.outcomes
                        .iter()
                        .map(|(x, e)| OutcomeEntry {
                            input: x.clone(),
                            entries: encode_entries(e),
                        })
                        .collect()
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: StrategyFile = serde_json::from_str(text)?;
        let measurements = file
            .messages
            .into_iter()
            .map(|outs| {
                let outcomes = outs
                    .into_iter()
                    .map(|o| Ok((o.input, decode_square(&o.entries)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Measurement { outcomes })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EaStrategy {
            local_dim: file.local_dim,
            measurements,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementIssue {
    pub message: usize,
    pub problem: String,
}

/// `Tr(beta^m_x beta^m'_x') != 0` for confusable or equal `x, x'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityViolation {
    pub m: usize,
    pub m2: usize,
    pub x: String,
    pub x2: String,
    pub trace: f64,
}

/// Bob's per-message operators for output `y` overlap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderOverlap {
    pub output: String,
    pub m: usize,
    pub m2: usize,
    pub trace: f64,
}

/// A replayed path `(m, x, y)` that Bob does not decode to exactly `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayFailure {
    pub m: usize,
    pub x: String,
    pub output: String,
    pub decoded: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EaReport {
    pub messages: usize,
    pub local_dim: usize,
    pub measurement_issues: Vec<MeasurementIssue>,
    pub orthogonality_violations: Vec<OrthogonalityViolation>,
    pub decoder_overlaps: Vec<DecoderOverlap>,
    pub replay_failures: Vec<ReplayFailure>,
    pub pairs_checked: usize,
    pub paths_replayed: usize,
    pub tolerance: TolerancePolicy,
}

impl EaReport {
    pub fn is_valid(&self) -> bool {
        self.measurement_issues.is_empty()
            && self.orthogonality_violations.is_empty()
            && self.decoder_overlaps.is_empty()
            && self.replay_failures.is_empty()
    }
}

struct Residual {
    x: usize,
    alice: CMat,
    beta: CMat,
}

fn trace_real(a: &CMat, b: &CMat) -> Result<f64> {
    Ok(linalg::hs_inner(a, b)?.re)
}

/// Checks the strategy's measurements, the pairwise residual orthogonality
/// over all message pairs and confusable (or equal) inputs, the per-output
/// decoder supports, and replays every positive-probability path.
pub fn verify_ea_strategy(ch: &Channel, s: &EaStrategy, tol: &TolerancePolicy) -> Result<EaReport> {
    let d = s.local_dim;
    if d == 0 {
        return Err(Error::dim("local dimension must be positive"));
    }
    let g = confusability_graph(ch);
    let mut measurement_issues = Vec::new();
    let mut residuals: Vec<Vec<Residual>> = Vec::with_capacity(s.n_messages());
    for (m, meas) in s.measurements.iter().enumerate() {
        let mut row = Vec::with_capacity(meas.outcomes.len());
        let mut ops = Vec::with_capacity(meas.outcomes.len());
        for (label, e) in &meas.outcomes {
            let x = ch
                .input_index(label)
                .ok_or_else(|| Error::Invalid(format!("message {m} uses unknown input {label:?}")))?;
            if e.rows() != d || e.cols() != d {
                return Err(Error::dim(format!("operator for ({m}, {label}) is not {d}x{d}")));
            }
            if row.iter().any(|r: &Residual| r.x == x) {
                measurement_issues.push(MeasurementIssue {
                    message: m,
                    problem: format!("input {label:?} listed twice"),
                });
            }
            if !linalg::is_projector(e, tol)? {
                measurement_issues.push(MeasurementIssue {
                    message: m,
                    problem: format!("operator for input {label:?} is not a projector"),
                });
            }
            ops.push(e.clone());
            row.push(Residual {
                x,
                alice: e.clone(),
                beta: bob_residual(e, d)?,
            });
        }
        if !linalg::sums_to_identity(&ops, tol)? {
            measurement_issues.push(MeasurementIssue {
                message: m,
                problem: "operators do not sum to the identity".into(),
            });
        }
        residuals.push(row);
    }

    let q = s.n_messages();
    let pairs: Vec<(usize, usize)> = (0..q).flat_map(|m| ((m + 1)..q).map(move |m2| (m, m2))).collect();
    let checked: Vec<Result<(usize, Vec<OrthogonalityViolation>)>> = pairs
        .par_iter()
        .map(|&(m, m2)| {
            let mut count = 0;
            let mut out = Vec::new();
            for a in &residuals[m] {
                for b in &residuals[m2] {
                    if a.x != b.x && !g.adjacent(a.x, b.x) {
                        continue;
                    }
                    count += 1;
                    let t = trace_real(&a.beta, &b.beta)?;
                    if !tol.is_zero(t.abs(), "residual orthogonality")? {
                        out.push(OrthogonalityViolation {
                            m,
                            m2,
                            x: ch.inputs[a.x].clone(),
                            x2: ch.inputs[b.x].clone(),
                            trace: t,
                        });
                    }
                }
            }
            Ok((count, out))
        })
        .collect();
    let mut orthogonality_violations = Vec::new();
    let mut pairs_checked = 0;
    for r in checked {
        let (c, v) = r?;
        pairs_checked += c;
        orthogonality_violations.extend(v);
    }

    // Bob's operator for message m on output y; by PSD-ness, Tr(A B) = 0
    // iff the supports of A and B are orthogonal.
    let mut decoder_overlaps = Vec::new();
    let mut replay_failures = Vec::new();
    let mut paths_replayed = 0;
    for y in 0..ch.outputs.len() {
        let mut bob: Vec<Option<CMat>> = vec![None; q];
        for (m, row) in residuals.iter().enumerate() {
            for r in row {
                if ch.probs[r.x][y] > 0.0 {
                    match &mut bob[m] {
                        Some(acc) => acc.add_assign_checked(&r.beta)?,
                        slot => *slot = Some(r.beta.clone()),
                    }
                }
            }
        }
        for m in 0..q {
            for m2 in (m + 1)..q {
                if let (Some(a), Some(b)) = (&bob[m], &bob[m2]) {
                    let t = trace_real(a, b)?;
                    if !tol.is_zero(t.abs(), "decoder support overlap")? {
                        decoder_overlaps.push(DecoderOverlap {
                            output: ch.outputs[y].clone(),
                            m,
                            m2,
                            trace: t,
                        });
                    }
                }
            }
        }
        for (m, row) in residuals.iter().enumerate() {
            for r in row {
                let px = r.alice.trace().re / d as f64;
                if ch.probs[r.x][y] <= 0.0 || tol.is_zero(px, "outcome probability")? {
                    continue;
                }
                paths_replayed += 1;
                let mut decoded = Vec::new();
                for (m2, b) in bob.iter().enumerate() {
                    if let Some(b) = b {
                        if !tol.is_zero(trace_real(b, &r.beta)?.abs(), "replay overlap")? {
                            decoded.push(m2);
                        }
                    }
                }
                if decoded != [m] {
                    replay_failures.push(ReplayFailure {
                        m,
                        x: ch.inputs[r.x].clone(),
                        output: ch.outputs[y].clone(),
                        decoded,
                    });
                }
            }
        }
    }
    Ok(EaReport {
        messages: q,
        local_dim: d,
        measurement_issues,
        orthogonality_violations,
        decoder_overlaps,
        replay_failures,
        pairs_checked,
        paths_replayed,
        tolerance: *tol,
    })
}

/// Channel, strategy and graph of a separation instance.
#[derive(Debug, Clone)]
pub struct Construction {
    pub graph: Graph,
    pub channel: Channel,
    pub strategy: EaStrategy,
}

/// From a projective KS set: the channel of the orthogonality graph of its
/// measurement multiset, with message `m` sent by measuring the `m`-th
/// measurement and transmitting vertex `(m, outcome)`.
pub fn strategy_from_ks(set: &OperatorSet) -> Result<Construction> {
    let verdict = classify(set)?;
    if !verdict.classification.is_ks() {
        return Err(Error::pre("input set admits a marking function; it is not KS"));
    }
    strategy_from_cover(set, &verdict.cover)
}

/// As [`strategy_from_ks`] with a caller-supplied cover and no KS check.
pub fn strategy_from_cover(set: &OperatorSet, cover: &MeasurementCover) -> Result<Construction> {
    let graph = orthogonality_graph(set, cover)?;
    let channel = canonical_channel(&graph);
    let mut measurements = vec![Measurement { outcomes: Vec::new() }; cover.len()];
    for (v, label) in graph.labels().expect("slot labels").iter().enumerate() {
        let VertexLabel::Slot { subset, element } = *label else {
            return Err(Error::Integrity("orthogonality graph without slot labels".into()));
        };
        measurements[subset]
            .outcomes
            .push((channel.inputs[v].clone(), set.matrix(element).clone()));
    }
    Ok(Construction {
        graph,
        channel,
        strategy: EaStrategy {
            local_dim: set.dim(),
            measurements,
        },
    })
}

/// From a quantum `k`-colouring of `g`: the channel of `g [] K_k`, with
/// message `v` sent by measuring `{P^v_i}` and transmitting `(v, i)`.
pub fn strategy_from_coloring(g: &Graph, qc: &QuantumColoring, tol: &TolerancePolicy) -> Result<Construction> {
    let report = verify_normal_form(g, qc, tol)?;
    if !report.is_valid() {
        return Err(Error::pre(format!(
            "colouring is not in normal form ({} violations)",
            report.violations.len()
        )));
    }
    let k = qc.n_colors();
    let n = g.n_vertices();
    let mut graph = cartesian_product(g, &Graph::complete(k));
    graph.set_clique_partition((0..n).map(|v| (v * k..(v + 1) * k).collect()).collect())?;
    let channel = canonical_channel(&graph);
    let measurements = (0..n)
        .map(|v| Measurement {
            outcomes: (0..k)
                .map(|i| (channel.inputs[v * k + i].clone(), qc.projector(v, i)))
                .collect(),
        })
        .collect();
    Ok(Construction {
        graph,
        channel,
        strategy: EaStrategy {
            local_dim: qc.dim(),
            measurements,
        },
    })
}

/// Collects the strategy's projectors into a set and classifies it. With
/// `k` messages sent perfectly while `c0 < k`, the set must be projective
/// KS; a contrary verdict is an integrity error.
pub fn ks_from_strategy(
    ch: &Channel,
    s: &EaStrategy,
    k: usize,
    tol: &TolerancePolicy,
) -> Result<(OperatorSet, KsVerdict)> {
    let report = verify_ea_strategy(ch, s, tol)?;
    if !report.is_valid() {
        return Err(Error::pre("strategy does not verify"));
    }
    if s.n_messages() < k {
        return Err(Error::pre(format!("strategy sends {} < k = {k} messages", s.n_messages())));
    }
    let alpha = c0(ch)?.alpha;
    if alpha >= k {
        return Err(Error::pre(format!("c0 = {alpha} >= k = {k}: no separation to explain")));
    }
    let mut elements = Vec::new();
    for (m, meas) in s.measurements.iter().enumerate().take(k) {
        for (x, e) in &meas.outcomes {
            if !tol.is_zero(e.max_abs(), "zero strategy operator")? {
                elements.push(Element {
                    label: format!("m{m}:{x}"),
                    matrix: e.clone(),
                    ket: None,
                });
            }
        }
    }
    let set = OperatorSet::dedup_from(s.local_dim, SetKind::Projectors, elements, *tol)?;
    let verdict = classify(&set)?;
    if !verdict.classification.is_ks() {
        return Err(Error::Integrity(format!(
            "strategy with {k} messages beats c0 = {alpha} but its projectors admit a marking function"
        )));
    }
    Ok((set, verdict))
}

/// The Hadamard-graph separation as stated in the literature; none of these
/// inputs is recomputed here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteratureCrossCheck {
    pub n: u32,
    pub alpha_omega: u64,
    pub chi_q_omega: u64,
    /// `c0(Omega_n [] K_k) <= alpha(Omega_n) * k`
    pub c0_upper_bound: u64,
    /// `c0*(Omega_n [] K_k) = |V(Omega_n)|`
    pub c0_star: u64,
    pub unverified_inputs: Vec<String>,
}

pub fn literature_cross_check(n: u32, alpha_omega: u64, chi_q_omega: u64) -> LiteratureCrossCheck {
    LiteratureCrossCheck {
        n,
        alpha_omega,
        chi_q_omega,
        c0_upper_bound: alpha_omega * chi_q_omega,
        c0_star: 1u64 << n,
        unverified_inputs: vec![format!("alpha(Omega_{n}) = {alpha_omega}"), format!("chi_q(Omega_{n}) = {chi_q_omega}")],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::from_classical;
    use crate::ks::fixture_cabello18;

    fn identity_channel(n: usize) -> Channel {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let probs = (0..n).map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect()).collect();
        Channel::new(labels.clone(), labels, probs).unwrap()
    }

    #[test]
    fn confusability() {
        assert_eq!(confusability_graph(&identity_channel(4)).n_edges(), 0);
        let constant = Channel::new(
            (0..5).map(|i| i.to_string()).collect(),
            vec!["y".into()],
            vec![vec![1.0]; 5],
        )
        .unwrap();
        assert!(confusability_graph(&constant).same_edges(&Graph::complete(5)));
        assert_eq!(c0(&constant).unwrap().alpha, 1);
        assert_eq!(c0(&identity_channel(5)).unwrap().alpha, 5);
        let c5 = Graph::cycle(5);
        let ch = canonical_channel(&c5);
        assert_eq!(ch.outputs().len(), 10);
        assert!(confusability_graph(&ch).same_edges(&c5));
        assert_eq!(c0(&ch).unwrap().alpha, 2);
        let k2 = canonical_channel(&Graph::complete(2));
        assert_eq!(k2.outputs().len(), 3);
        assert_eq!(k2.prob(0, 0), 0.5);
        assert_eq!(canonical_channel(&Graph::empty(3)).outputs().len(), 3);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(Channel::new(vec!["a".into()], vec!["y".into(), "z".into()], vec![vec![0.5, 0.4]]).is_err());
        assert!(Channel::new(vec!["a".into()], vec!["y".into(), "z".into()], vec![vec![1.5, -0.5]]).is_err());
    }

    #[test]
    fn single_message_always_verifies() {
        let tol = TolerancePolicy::default();
        let ch = canonical_channel(&Graph::complete(3));
        let s = EaStrategy {
            local_dim: 2,
            measurements: vec![Measurement {
                outcomes: vec![
                    ("v0".into(), crate::linalg::Ket::basis(2, 0).projector()),
                    ("v2".into(), crate::linalg::Ket::basis(2, 1).projector()),
                ],
            }],
        };
        assert!(verify_ea_strategy(&ch, &s, &tol).unwrap().is_valid());
    }

    #[test]
    fn cabello_strategy_and_fault() {
        let tol = TolerancePolicy::default();
        let set = fixture_cabello18();
        let c = strategy_from_ks(&set).unwrap();
        assert_eq!(c.graph.n_vertices(), 36);
        assert_eq!(c.strategy.n_messages(), 9);
        let report = verify_ea_strategy(&c.channel, &c.strategy, &tol).unwrap();
        assert!(report.is_valid(), "{report:?}");
        assert!(report.paths_replayed > 0);
        assert!(c0(&c.channel).unwrap().alpha < 9);

        // message 1 moved onto the inputs of message 0
        let mut bad = c.strategy.clone();
        let inputs0: Vec<String> = bad.measurements[0].outcomes.iter().map(|(x, _)| x.clone()).collect();
        for (o, x) in bad.measurements[1].outcomes.iter_mut().zip(&inputs0) {
            o.0 = x.clone();
        }
        let report = verify_ea_strategy(&c.channel, &bad, &tol).unwrap();
        assert!(report
            .orthogonality_violations
            .iter()
            .any(|v| v.m == 0 && v.m2 == 1 && v.x == v.x2));
        assert!(!report.is_valid());
    }

    #[test]
    fn non_ks_input_is_refused() {
        let tol = TolerancePolicy::default();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let kets = vec![
            ("0".to_string(), crate::linalg::Ket::from_real(&[1.0, 0.0]).unwrap()),
            ("1".to_string(), crate::linalg::Ket::from_real(&[0.0, 1.0]).unwrap()),
            ("+".to_string(), crate::linalg::Ket::from_real(&[h, h]).unwrap()),
            ("-".to_string(), crate::linalg::Ket::from_real(&[h, -h]).unwrap()),
        ];
        let set = OperatorSet::from_kets(2, kets, tol).unwrap();
        assert!(matches!(strategy_from_ks(&set), Err(Error::Precondition(_))));
    }

    #[test]
    fn coloring_strategy_on_pentagon() {
        let tol = TolerancePolicy::default();
        let c5 = Graph::cycle(5);
        let qc = from_classical(&c5, &[0, 1, 0, 1, 2], 3).unwrap();
        let c = strategy_from_coloring(&c5, &qc, &tol).unwrap();
        assert_eq!(c.graph.n_vertices(), 15);
        assert_eq!(c.strategy.n_messages(), 5);
        assert!(verify_ea_strategy(&c.channel, &c.strategy, &tol).unwrap().is_valid());
    }

    #[test]
    fn ks_round_trip_and_refusal() {
        let tol = TolerancePolicy::default();
        let c = strategy_from_ks(&fixture_cabello18()).unwrap();
        let (set, verdict) = ks_from_strategy(&c.channel, &c.strategy, 9, &tol).unwrap();
        assert_eq!(set.len(), 18);
        assert!(verdict.classification.is_ks());

        let ch = identity_channel(2);
        let s = EaStrategy {
            local_dim: 1,
            measurements: vec![
                Measurement {
                    outcomes: vec![("0".into(), CMat::identity(1))],
                },
                Measurement {
                    outcomes: vec![("1".into(), CMat::identity(1))],
                },
            ],
        };
        assert!(matches!(ks_from_strategy(&ch, &s, 2, &tol), Err(Error::Precondition(_))));
    }

    #[test]
    fn strategy_json_round_trip() {
        let c = strategy_from_ks(&fixture_cabello18()).unwrap();
        let back = EaStrategy::from_json_str(&c.strategy.to_json().unwrap()).unwrap();
        assert_eq!(back.n_messages(), 9);
        let tol = TolerancePolicy::default();
        assert!(verify_ea_strategy(&c.channel, &back, &tol).unwrap().is_valid());
        let ch = Channel::from_json_str(&c.channel.to_json().unwrap()).unwrap();
        assert_eq!(ch, c.channel);
    }

    #[test]
    fn literature_arithmetic() {
        let x = literature_cross_check(16, 2304, 16);
        assert_eq!(x.c0_upper_bound, 36864);
        assert_eq!(x.c0_star, 65536);
    }
}
