mod common;

use kscore::channels::{self, EaStrategy, Measurement};
use kscore::coloring::{self, KsOutcome, QuantumColoring};
use kscore::games::{self, GameQuantumStrategy};
use kscore::graphs::{self, Graph};
use kscore::ks::{self, Classification, OperatorSet};
use kscore::linalg::{self, CMat, TolerancePolicy};
use kscore::theta;
use kscore::Error;
use num_complex::Complex64;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn hadamard_graph_is_regular_of_binomial_degree() {
    for n in [2, 4, 6, 8, 10] {
        let g = graphs::hadamard_graph(n).unwrap();
        let expected = binomial(n, n / 2);
        for u in 0..g.n_vertices() {
            let by_count = (0..g.n_vertices()).filter(|&v| (u ^ v).count_ones() as usize == n / 2).count();
            assert_eq!(by_count, expected);
            assert_eq!(g.degree(u), expected, "n = {n}, u = {u}");
        }
        assert_eq!(g.n_edges(), (1 << n) * expected / 2);
    }
}

#[test]
fn theta_is_multiplicative_on_cliques_times_cocliques() {
    for (n, k) in [(1, 5), (2, 3), (3, 3), (4, 2), (5, 4), (8, 8)] {
        let g = graphs::strong_product(&Graph::empty(n), &Graph::complete(k));
        let t = theta::lovasz_theta(&g, 1e-6).unwrap();
        assert!((t.value - n as f64).abs() < 1e-4, "n = {n}, k = {k}: {}", t.value);
    }
}

#[test]
fn lift_preserves_classification() {
    let s = ks::fixture_cabello18();
    for m in 1..=3 {
        let l = ks::lift(&s, m).unwrap();
        assert_eq!(l.dim(), 4 * m);
        assert_eq!(ks::classify(&l).unwrap().classification, Classification::WeakOrProjectiveKs);
    }
    let plain = ks::weak_from_projective(&ks::lift(&s, 2).unwrap()).unwrap();
    assert_eq!(plain.len(), 36);
}

#[test]
fn every_fixture_separates_and_round_trips() {
    for set in [ks::fixture_cabello18(), ks::fixture_peres24()] {
        let verdict = ks::classify(&set).unwrap();
        assert!(verdict.classification.is_ks());
        let k = verdict.cover.len();
        let c = channels::strategy_from_ks(&set).unwrap();
        let report = channels::verify_ea_strategy(&c.channel, &c.strategy, &tol()).unwrap();
        assert!(report.is_valid(), "{report:?}");
        let alpha = channels::c0(&c.channel).unwrap();
        assert!(alpha.alpha < k, "c0 = {} vs k = {k}", alpha.alpha);
        assert!(common::is_independent(&c.graph, &alpha.witness));

        let (extracted, v) = channels::ks_from_strategy(&c.channel, &c.strategy, k, &tol()).unwrap();
        assert_eq!(v.classification, Classification::WeakOrProjectiveKs);
        assert_eq!(extracted.len(), set.len());
    }
}

fn phase_unitary() -> CMat {
    let phases = [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_3];
    let mut u = CMat::zeros(4, 4);
    for (i, p) in phases.iter().enumerate() {
        u[(i, i)] = Complex64::from_polar(1.0, *p);
    }
    u
}

#[test]
fn bob_must_use_the_conjugate_operators() {
    let set = ks::fixture_cabello18().rotated(&phase_unitary()).unwrap();
    let (game, qs, _) = games::game_from_ks(&set).unwrap();
    let honest = games::quantum_loses_probability_zero(&game, &qs, &tol()).unwrap();
    assert!(honest.never_loses());

    let faulty = GameQuantumStrategy {
        bob: qs.alice.clone(),
        ..qs.clone()
    };
    let report = games::quantum_loses_probability_zero(&game, &faulty, &tol()).unwrap();
    assert!(!report.flags.is_empty());
    assert!(report.law_violations.is_empty());
}

#[test]
fn rotated_set_still_separates() {
    let set = ks::fixture_cabello18().rotated(&phase_unitary()).unwrap();
    let c = channels::strategy_from_ks(&set).unwrap();
    assert!(channels::verify_ea_strategy(&c.channel, &c.strategy, &tol()).unwrap().is_valid());

    let mut broken = c.strategy.clone();
    let (m, o) = (0..broken.n_messages())
        .flat_map(|m| (0..broken.measurements[m].outcomes.len()).map(move |o| (m, o)))
        .find(|&(m, o)| {
            let e = &c.strategy.measurements[m].outcomes[o].1;
            e.max_abs_diff(&e.conj()).unwrap() > 0.1
        })
        .expect("some operator is not real");
    let (label, e) = broken.measurements[m].outcomes[o].clone();
    broken.measurements[m].outcomes[o] = (label, e.conj());
    let report = channels::verify_ea_strategy(&c.channel, &broken, &tol()).unwrap();
    assert!(!report.is_valid());
}

/// Two orthonormal bases of C^3 sharing the first vector: not KS.
fn two_bases() -> OperatorSet {
    let s = 0.5f64.sqrt();
    let kets = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, s, s],
        [0.0, s, -s],
    ]
    .iter()
    .enumerate()
    .map(|(i, v)| (format!("k{i}"), linalg::Ket::from_real(v).unwrap()))
    .collect();
    OperatorSet::from_kets(3, kets, tol()).unwrap()
}

#[test]
fn perfect_classical_strategy_of_a_non_ks_set_is_a_marking() {
    let set = two_bases();
    let verdict = ks::classify(&set).unwrap();
    assert_eq!(verdict.classification, Classification::NotKs);
    assert!(games::game_from_ks(&set).is_err());

    let (game, qs) = games::game_from_cover(&set, &verdict.cover).unwrap();
    assert!(games::quantum_loses_probability_zero(&game, &qs, &tol()).unwrap().never_loses());
    let cv = games::classical_value(&game).unwrap();
    assert_eq!(cv.value, 1.0);
    assert!(cv.losing.is_empty());
    let marking = games::marking_from_strategy(&set, &verdict.cover, &cv.strategy).unwrap().unwrap();
    let check = ks::validate_marking(&set, &verdict.cover, ks::forbid_for(set.kind()), &marking).unwrap();
    assert!(check.is_ok(), "{check:?}");
    let report = games::is_pseudo_telepathy(&game, &qs, &tol()).unwrap();
    assert!(!report.is_pseudo_telepathy);
}

#[test]
fn best_classical_strategy_of_cabello_is_not_a_marking() {
    let set = ks::fixture_cabello18();
    let (game, _, cover) = games::game_from_ks(&set).unwrap();
    let cv = games::classical_value(&game).unwrap();
    assert!(cv.value < 1.0);
    assert!(!cv.losing.is_empty());
    for &(x, y, a, b) in &cv.losing {
        assert!(!game.wins(a, b, x, y));
    }
    match games::marking_from_strategy(&set, &cover, &cv.strategy).unwrap() {
        Err(_) => {}
        Ok(m) => assert!(ks::validate_marking(&set, &cover, ks::forbid_for(set.kind()), &m).unwrap().is_err()),
    }
}

/// The nine bases of Cabello's set lifted to rank-2 projectors in C^8, one
/// vertex per basis; `(v, w)` is an edge when every colour class is
/// orthogonal across the two vertices.
fn lifted_cabello_coloring() -> (Graph, QuantumColoring) {
    let set = ks::lift(&ks::fixture_cabello18(), 2).unwrap();
    let cover = ks::enumerate_measurements(&set).unwrap();
    assert_eq!(cover.len(), 9);
    let projectors: Vec<Vec<CMat>> = cover
        .subsets
        .iter()
        .map(|s| s.iter().map(|&e| set.matrix(e).clone()).collect())
        .collect();
    let mut g = Graph::empty(projectors.len());
    for v in 0..projectors.len() {
        for w in v + 1..projectors.len() {
            let all_orthogonal = (0..4).all(|a| {
                linalg::trace_orthogonal(&projectors[v][a], &projectors[w][a], &tol()).unwrap()
            });
            if all_orthogonal {
                g.add_edge(v, w).unwrap();
            }
        }
    }
    (g, QuantumColoring::new(4, 2, projectors).unwrap())
}

#[test]
fn lifted_cabello_coloring_is_a_ks_certificate() {
    let (g, qc) = lifted_cabello_coloring();
    let report = coloring::verify_normal_form(&g, &qc, &tol()).unwrap();
    assert!(report.is_valid(), "{report:?}");
    assert_eq!(qc.dim(), 8);
    match coloring::ks_characterization(&g, &qc, &tol()).unwrap() {
        KsOutcome::KsSet { set, verdict, slots } => {
            assert_eq!(set.len(), 18);
            assert!(verdict.classification.is_ks());
            assert!(verdict.exhaustion().is_some());
            assert_eq!(slots.len(), 9);
        }
        KsOutcome::Classical { .. } => panic!("lifted Cabello bases admit no marking"),
    }
}

#[test]
fn classical_coloring_is_recovered() {
    let g = Graph::cycle(5);
    let chi = graphs::chromatic_number(&g).unwrap();
    let qc = coloring::from_classical(&g, &chi.coloring, 3).unwrap();
    match coloring::ks_characterization(&g, &qc, &tol()).unwrap() {
        KsOutcome::Classical { coloring } => assert!(common::is_proper(&g, &coloring, 3)),
        KsOutcome::KsSet { .. } => panic!("a classical colouring has a marking"),
    }
    let game = games::coloring_game(&g, 3).unwrap();
    let rep = games::quantum_loses_probability_zero(&game, &games::coloring_strategy(&qc), &tol()).unwrap();
    assert!(rep.never_loses());
}

#[test]
fn hadamard_coloring_wins_the_coloring_game() {
    let g = graphs::hadamard_graph(4).unwrap();
    let qc = coloring::hadamard_coloring(4).unwrap();
    let game = games::coloring_game(&g, 4).unwrap();
    let rep = games::quantum_loses_probability_zero(&game, &games::coloring_strategy(&qc), &tol()).unwrap();
    assert!(rep.never_loses(), "{rep:?}");
}

#[test]
fn coloring_separation_respects_alpha_times_k() {
    for (g, qc) in [
        (graphs::hadamard_graph(4).unwrap(), coloring::hadamard_coloring(4).unwrap()),
        (Graph::cycle(5), {
            let chi = graphs::chromatic_number(&Graph::cycle(5)).unwrap();
            coloring::from_classical(&Graph::cycle(5), &chi.coloring, 3).unwrap()
        }),
    ] {
        let c = channels::strategy_from_coloring(&g, &qc, &tol()).unwrap();
        let report = channels::verify_ea_strategy(&c.channel, &c.strategy, &tol()).unwrap();
        assert!(report.is_valid());
        assert_eq!(c.strategy.n_messages(), g.n_vertices());
        let a = channels::c0(&c.channel).unwrap().alpha;
        let ag = graphs::independence_number(&g).unwrap().alpha;
        assert!(a <= ag * qc.n_colors());
    }
}

#[test]
fn single_message_always_verifies() {
    let ch = channels::canonical_channel(&Graph::cycle(4));
    let label = ch.inputs()[2].clone();
    let s = EaStrategy {
        local_dim: 2,
        measurements: vec![Measurement {
            outcomes: vec![(label, CMat::identity(2))],
        }],
    };
    assert!(channels::verify_ea_strategy(&ch, &s, &tol()).unwrap().is_valid());
}

#[test]
fn non_ks_set_is_refused_by_constructors() {
    let set = two_bases();
    assert!(matches!(channels::strategy_from_ks(&set), Err(Error::Precondition(_))));
    assert!(matches!(games::game_from_ks(&set), Err(Error::Precondition(_))));
}
