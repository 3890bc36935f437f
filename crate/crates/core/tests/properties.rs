mod common;

use kscore::channels::{self, Channel};
use kscore::graphs::{self, io as graph_io, Graph};
use kscore::ks::{self, Forbid, OperatorSet};
use kscore::linalg::{self, CMat, Ket, TolerancePolicy};
use kscore::theta;
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_an_involution(g in common::graph(0, 20)) {
        let c = graphs::complement(&g);
        let n = g.n_vertices();
        prop_assert_eq!(g.n_edges() + c.n_edges(), n * n.saturating_sub(1) / 2);
        prop_assert!(graphs::complement(&c).same_edges(&g));
    }

    #[test]
    fn edge_list_round_trip(g in common::graph(0, 30)) {
        let text = graph_io::write_graph(&g);
        let back = graph_io::parse_graph(&text).unwrap();
        prop_assert_eq!(back.n_vertices(), g.n_vertices());
        prop_assert!(back.same_edges(&g));
    }

    #[test]
    fn canonical_channel_round_trip(g in common::graph(1, 40)) {
        let ch = channels::canonical_channel(&g);
        prop_assert!(channels::confusability_graph(&ch).same_edges(&g));
        let back = Channel::from_json_str(&ch.to_json().unwrap()).unwrap();
        prop_assert!(channels::confusability_graph(&back).same_edges(&g));
    }

    #[test]
    fn alpha_matches_subset_scan(g in common::graph(0, 14)) {
        let r = graphs::independence_number(&g).unwrap();
        prop_assert_eq!(r.alpha, common::alpha_by_subsets(&g));
        prop_assert_eq!(r.witness.len(), r.alpha);
        prop_assert!(common::is_independent(&g, &r.witness));
    }

    #[test]
    fn chi_matches_backtracking(g in common::graph(0, 10)) {
        let r = graphs::chromatic_number(&g).unwrap();
        prop_assert_eq!(r.chi, common::chi_by_subsets(&g));
        prop_assert!(common::is_proper(&g, &r.coloring, r.chi));
    }

    #[test]
    fn vizing_bound(g in common::graph(1, 12), h in common::graph(1, 12)) {
        let ag = common::alpha_recursive(&g);
        let ah = common::alpha_recursive(&h);
        let p = graphs::cartesian_product(&g, &h);
        let a = graphs::independence_number(&p).unwrap().alpha;
        prop_assert!(a <= (ag * h.n_vertices()).min(ah * g.n_vertices()));
    }

    #[test]
    fn cartesian_with_clique_is_below_n_when_chi_exceeds_k(g in common::graph(1, 12), pick in 0.0..1.0f64) {
        let n = g.n_vertices();
        let chi = common::chi_by_subsets(&g);
        prop_assume!(chi >= 2);
        let k = 1 + ((chi - 1) as f64 * pick) as usize;
        let k = k.min(chi - 1);
        let a = graphs::independence_number(&graphs::cartesian_product(&g, &Graph::complete(k))).unwrap().alpha;
        prop_assert!(a < n, "alpha = {a}, n = {n}, chi = {chi}, k = {k}");
        prop_assert!(a <= common::alpha_by_subsets(&g) * k);
    }

    #[test]
    fn guard_band_is_ambiguous(value in 1.01e-9..0.99e-7f64, sign in any::<bool>()) {
        let v = if sign { value } else { -value };
        prop_assert!(tol().is_zero(v, "probe").is_err());
        prop_assert!(tol().is_zero(v * 1e-3, "probe").unwrap());
        prop_assert!(!tol().is_zero(v * 1e3, "probe").unwrap());
    }
}

fn random_projector(n: usize, rank: usize, coins: &[f64]) -> CMat {
    // Gram-Schmidt on `rank` pseudo-random complex vectors
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut k = 0;
    while basis.len() < rank {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| {
                let z = Complex64::new(coins[k % coins.len()] - 0.5, coins[(k + 1) % coins.len()] - 0.5);
                k += 2;
                z
            })
            .collect();
        for b in &basis {
            let c: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMat::from_fn(n, n, |i, j| basis.iter().map(|b| b[i] * b[j].conj()).sum())
}

/// `Tr_A` of `(P (x) I)|Psi><Psi|` built as an explicit `n^2 x n^2` matrix.
fn dense_partial_trace(p: &CMat, n: usize) -> CMat {
    let psi = linalg::max_entangled_state(n);
    let big = p.kron(&CMat::identity(n));
    let phi = big.mul_vec(&psi).unwrap();
    let rho = CMat::outer(&phi, &psi);
    CMat::from_fn(n, n, |a, b| (0..n).map(|k| rho[(k * n + a, k * n + b)]).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bob_residual_matches_dense_partial_trace(
        n in 1usize..6,
        rank_pick in 0.0..1.0f64,
        coins in proptest::collection::vec(0.0..1.0f64, 97),
    ) {
        let rank = 1 + ((n - 1) as f64 * rank_pick).round() as usize;
        let p = random_projector(n, rank, &coins);
        prop_assert!(linalg::is_projector(&p, &tol()).unwrap());
        let hs = linalg::hs_inner(&p, &p).unwrap();
        prop_assert!((hs.re - rank as f64).abs() < 1e-9);
        let fast = linalg::bob_residual(&p, n).unwrap();
        let oracle = dense_partial_trace(&p, n);
        prop_assert!(fast.max_abs_diff(&oracle).unwrap() < 1e-12);
        prop_assert!(fast.max_abs_diff(&p.transpose().scale_real(1.0 / n as f64)).unwrap() < 1e-12);
    }

    #[test]
    fn support_basis_spans_range(
        n in 1usize..6,
        rank_pick in 0.0..1.0f64,
        coins in proptest::collection::vec(0.0..1.0f64, 97),
    ) {
        let rank = 1 + ((n - 1) as f64 * rank_pick).round() as usize;
        let p = random_projector(n, rank, &coins);
        let basis = linalg::support_basis(&p, &tol()).unwrap();
        prop_assert_eq!(basis.len(), rank);
        for (i, b) in basis.iter().enumerate() {
            let pb = p.mul_vec(b.amps()).unwrap();
            let defect = pb.iter().zip(b.amps()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            prop_assert!(defect < 1e-9);
            for c in &basis[i + 1..] {
                prop_assert!(b.inner(c).norm() < 1e-9);
            }
        }
    }
}

/// Directions in R^3 with entries in {-1, 0, 1}, one per antipodal pair.
const DIRECTIONS: [[i32; 3]; 13] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [-1, 1, 1],
];

fn dot(a: [i32; 3], b: [i32; 3]) -> i32 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Does some `f: S -> {0,1}` mark exactly one element per cover subset
/// (and, if `orth`, never two orthogonal elements)? Scans all `2^|S|`.
fn marking_exists_by_scan(dirs: &[[i32; 3]], cover: &[Vec<usize>], orth: bool) -> bool {
    let n = dirs.len();
    (0u32..1 << n).any(|f| {
        cover.iter().all(|s| s.iter().filter(|&&e| f >> e & 1 == 1).count() == 1)
            && (!orth
                || (0..n).all(|i| {
                    (i + 1..n).all(|j| !(f >> i & 1 == 1 && f >> j & 1 == 1 && dot(dirs[i], dirs[j]) == 0))
                }))
    })
}

/// Orthonormal bases among `dirs`, found by brute force over triples.
fn bases_by_scan(dirs: &[[i32; 3]]) -> Vec<Vec<usize>> {
    let n = dirs.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if dot(dirs[i], dirs[j]) == 0 && dot(dirs[i], dirs[k]) == 0 && dot(dirs[j], dirs[k]) == 0 {
                    out.push(vec![i, j, k]);
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn marking_search_agrees_with_full_scan(
        dirs in proptest::sample::subsequence(DIRECTIONS.to_vec(), 3..=12),
    ) {
        let kets = dirs
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("d{i}"), Ket::from_real(&d.map(f64::from)).unwrap()))
            .collect();
        let set = OperatorSet::from_kets(3, kets, tol()).unwrap();
        let cover = ks::enumerate_measurements(&set).unwrap();
        let mut expected = bases_by_scan(&dirs);
        let mut got = cover.subsets.clone();
        for s in got.iter_mut().chain(expected.iter_mut()) {
            s.sort_unstable();
        }
        got.sort();
        expected.sort();
        prop_assert_eq!(&got, &expected);
        prop_assume!(!cover.is_empty());

        for (forbid, orth) in [(Forbid::OrthogonalPair, true), (Forbid::None, false)] {
            let found = ks::search_marking(&set, &cover, forbid).unwrap();
            prop_assert_eq!(found.is_some(), marking_exists_by_scan(&dirs, &cover.subsets, orth));
            if let Some(m) = found {
                prop_assert!(ks::validate_marking(&set, &cover, forbid, &m).unwrap().is_ok());
            }
        }
        let verdict = ks::classify(&set).unwrap();
        prop_assert_eq!(verdict.classification.is_ks(), !marking_exists_by_scan(&dirs, &cover.subsets, true));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn theta_sandwich_and_edge_removal(g in common::graph(2, 12), pick in 0.0..1.0f64) {
        let eps = 1e-6;
        let t = theta::lovasz_theta(&g, eps).unwrap();
        prop_assert!(t.value <= t.dual_bound);
        let alpha = common::alpha_by_subsets(&g);
        let chi_bar = common::chi_by_subsets(&graphs::complement(&g));
        prop_assert!(alpha as f64 <= t.dual_bound + eps);
        prop_assert!(t.value <= chi_bar as f64 + eps);

        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let drop = edges[((edges.len() as f64 * pick) as usize).min(edges.len() - 1)];
        let kept: Vec<_> = edges.into_iter().filter(|&e| e != drop).collect();
        let smaller = Graph::from_edges(g.n_vertices(), &kept).unwrap();
        let ts = theta::lovasz_theta(&smaller, eps).unwrap();
        prop_assert!(ts.dual_bound >= t.value - 2.0 * eps);
    }
}
