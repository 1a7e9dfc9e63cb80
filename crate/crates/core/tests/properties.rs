use std::collections::BTreeSet;

use l1embed_core::cut::{decompose_with_order, small_side_first_order};
use l1embed_core::nesting::hypergraph_chromatic_number;
use l1embed_core::*;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Positive rational weights closed under shortest paths.
fn metric_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (min_n..=max_n).prop_flat_map(|n| {
        prop::collection::vec((1i64..=9, 1i64..=3), n * (n - 1) / 2).prop_map(move |w| {
            let mut d = vec![vec![Rational::zero(); n]; n];
            let mut it = w.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let (a, b) = it.next().unwrap();
                    d[i][j] = rat(a, b);
                    d[j][i] = rat(a, b);
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let via = &d[i][k] + &d[k][j];
                        if via < d[i][j] {
                            d[i][j] = via;
                        }
                    }
                }
            }
            FiniteMetricSpace::new(d).unwrap()
        })
    })
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (0u64..(1u64 << pairs)).prop_map(move |mask| SimpleGraph::from_pair_mask(n, mask))
    })
}

fn params_strategy() -> impl Strategy<Value = TwoDistanceParams> {
    // a = p/q, b = a * (1 + r/s) with 0 < r/s <= 1.
    (1i64..=5, 1i64..=3, 1i64..=4, 1i64..=4).prop_filter_map("b <= 2a", |(p, q, r, s)| {
        let a = rat(p, q);
        let b = &a * &(Rational::one() + rat(r, s));
        TwoDistanceParams::new(a, b).ok()
    })
}

fn decomposition_strategy(max_n: usize, max_k: usize) -> impl Strategy<Value = CutDecomposition> {
    (2..=max_n).prop_flat_map(move |n| {
        let total = (1usize << (n - 1)) - 1;
        (
            prop::collection::btree_set(0..total, 0..=max_k.min(total)),
            prop::collection::vec((1i64..=7, 1i64..=4), max_k),
        )
            .prop_map(move |(chosen, weights)| {
                let cuts = all_cuts(n, 14).unwrap();
                let terms = chosen
                    .into_iter()
                    .zip(weights)
                    .map(|(c, (p, q))| (cuts[c], rat(p, q)))
                    .collect();
                CutDecomposition::new(n, terms).unwrap()
            })
    })
}

/// Oracle for the metric axioms, written independently of `validate_metric`.
fn satisfies_axioms(m: &[Vec<i64>], allow_pseudo: bool) -> bool {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            let ok = if i == j {
                m[i][j] == 0
            } else {
                m[i][j] == m[j][i] && m[i][j] >= 0 && (allow_pseudo || m[i][j] > 0)
            };
            if !ok {
                return false;
            }
            for k in 0..n {
                if m[i][j] > m[i][k] + m[k][j] {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn validation_matches_axiom_oracle(
        rows in (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-1i64..=3, n), n)),
        allow_pseudo in any::<bool>(),
    ) {
        let matrix: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect();
        let got = validate_metric(matrix, allow_pseudo);
        prop_assert_eq!(got.is_ok(), satisfies_axioms(&rows, allow_pseudo), "{:?}", got);
    }

    #[test]
    fn two_distance_spaces_are_metrics(g in graph_strategy(6), p in params_strategy()) {
        for mode in [AdjacentGets::A, AdjacentGets::B] {
            let x = two_distance_from_graph(&g, &p, mode);
            prop_assert!(FiniteMetricSpace::new(x.rows()).is_ok());
        }
    }

    #[test]
    fn hausdorff_triangle_inequality(
        x in metric_strategy(2, 6),
        masks in (1u64..64, 1u64..64, 1u64..64),
    ) {
        let n = x.len();
        let subset = |mask: u64| -> Vec<usize> {
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if s.is_empty() { vec![0] } else { s }
        };
        let (a, b, c) = (subset(masks.0), subset(masks.1), subset(masks.2));
        let ab = hausdorff_distance(&x, &a, &b).unwrap();
        let bc = hausdorff_distance(&x, &b, &c).unwrap();
        let ac = hausdorff_distance(&x, &a, &c).unwrap();
        prop_assert!(ac <= &ab + &bc);
        prop_assert_eq!(hausdorff_distance(&x, &a, &a).unwrap(), Rational::zero());
        prop_assert_eq!(ab.clone(), hausdorff_distance(&x, &b, &a).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gh_is_symmetric_and_bracketed(x in metric_strategy(1, 4), y in metric_strategy(1, 4)) {
        let xy = gh_distance_exact(&x, &y, 8).unwrap();
        let yx = gh_distance_exact(&y, &x, 8).unwrap();
        prop_assert_eq!(&xy.distance, &yx.distance);
        let (lo, hi) = gh_bounds(&x, &y);
        prop_assert!(lo <= xy.distance && xy.distance <= hi);
        let twice = &xy.distance + &xy.distance;
        prop_assert_eq!(distortion(&xy.witness, &x, &y).unwrap(), twice.clone());
        prop_assert_eq!(twice_gh_distance(&x, &y, 8).unwrap(), twice);
        prop_assert_eq!(gh_distance_exact(&x, &x, 8).unwrap().distance, Rational::zero());
    }

    #[test]
    fn gh_triangle_inequality(x in metric_strategy(1, 3), y in metric_strategy(1, 3), z in metric_strategy(1, 3)) {
        let d = |a: &FiniteMetricSpace, b: &FiniteMetricSpace| twice_gh_distance(a, b, 8).unwrap();
        prop_assert!(d(&x, &z) <= &d(&x, &y) + &d(&y, &z));
    }

    #[test]
    fn simplex_closed_form_matches_search(
        x in metric_strategy(1, 4),
        extra in 1usize..=3,
        k in 0i64..=16,
    ) {
        // lambda = diam * k/8 ranges over [0, 2 diam].
        let m = x.len() + extra;
        let lambda = &rat(k, 8) * &x.diam();
        let searched = gh_distance_exact(&simplex(m, &lambda).unwrap(), &x, 8).unwrap().distance;
        prop_assert_eq!(searched, gh_simplex_closed_form(&lambda, m, &x).unwrap());
    }

    #[test]
    fn decompose_round_trips(dec in decomposition_strategy(5, 5)) {
        let d = evaluate_decomposition(&dec);
        let again = decompose(&d).unwrap();
        prop_assert_eq!(evaluate_decomposition(&again), d);
    }

    #[test]
    fn lemma_one_equivalence(
        n in 1usize..=5,
        pair_picks in prop::collection::vec((0usize..5, 0usize..5), 0..=2),
        triple_picks in prop::collection::vec((0usize..5, 0usize..5, 0usize..5), 0..=3),
        m in 1usize..=4,
    ) {
        let pairs: Vec<(usize, usize)> =
            pair_picks.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let triples: Vec<[usize; 3]> = triple_picks
            .into_iter()
            .map(|(a, b, c)| [a % n, b % n, c % n])
            .filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
            .collect();
        let Ok(h) = Hypergraph::new(n, pairs, triples) else { return Ok(()) };
        let family = enumerate_graph_family(&h, 12).unwrap();
        let some_graph = family.graphs().iter().any(|g| chromatic_number(g, 16).unwrap().chi <= m);
        let colorable = hypergraph_colorable(&h, m);
        prop_assert_eq!(colorable.is_some(), some_graph);
        if let Some(c) = colorable {
            prop_assert!(h.is_proper_coloring(&c));
        }
    }

    #[test]
    fn hypergraph_chromatic_number_is_relabeling_invariant(
        n in 3usize..=6,
        triple_picks in prop::collection::vec((0usize..6, 0usize..6, 0usize..6), 0..=4),
        seed_perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let triples: Vec<[usize; 3]> = triple_picks
            .into_iter()
            .map(|(a, b, c)| [a % n, b % n, c % n])
            .filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
            .collect();
        let h = Hypergraph::new(n, [], triples).unwrap();
        let perm: Vec<usize> = seed_perm.into_iter().filter(|&v| v < n).collect();
        prop_assert_eq!(hypergraph_chromatic_number(&h).0, hypergraph_chromatic_number(&h.relabel(&perm)).0);
    }

    #[test]
    fn gh_value_is_isomorphism_invariant(g in graph_strategy(5), m in 1usize..=4, p in params_strategy()) {
        let n = g.vertex_count();
        let perm: Vec<usize> = (0..n).rev().collect();
        let h = SimpleGraph::new(n, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        let sim = simplex(m, p.a()).unwrap();
        let a = twice_gh_distance(&sim, &two_distance_from_graph(&g, &p, AdjacentGets::B), 8).unwrap();
        let b = twice_gh_distance(&sim, &two_distance_from_graph(&h, &p, AdjacentGets::B), 8).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(g.isomorphism_key(usize::MAX), h.isomorphism_key(usize::MAX));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Random four-point metrics are always in the cut cone, and all routes agree.
    #[test]
    fn four_point_metrics_cross_validate(x in metric_strategy(4, 4)) {
        let r = cross_validate(&x, &PipelineConfig::default()).unwrap();
        let Dimension::Embeddable(dim) = r.dimension else { panic!("four points always embed") };
        let e = r.embedding.unwrap();
        prop_assert_eq!(e.dimension(), dim);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(&l1embed_core::l1dim::l1_distance(&e.coordinates[i], &e.coordinates[j]), x.dist(i, j));
            }
        }
    }
}

#[test]
fn k23_is_certified_outside_the_cut_cone() {
    // Parts {0,1} and {2,3,4}; the path metric is 2 inside a part, 1 across.
    let x = FiniteMetricSpace::from_integers([
        [0, 2, 1, 1, 1],
        [2, 0, 1, 1, 1],
        [1, 1, 0, 2, 2],
        [1, 1, 2, 0, 2],
        [1, 1, 2, 2, 0],
    ])
    .unwrap();
    // Hypermetric certificate with b = (-1, -1, +1, +1, +1), sum b = 1.
    let b = [-1i64, -1, 1, 1, 1];
    let value = |d: &dyn Fn(usize, usize) -> Rational| -> Rational {
        let mut s = Rational::zero();
        for i in 0..5 {
            for j in (i + 1)..5 {
                s = s + Rational::from_integer(b[i] * b[j]) * d(i, j);
            }
        }
        s
    };
    // Across pairs contribute -1 each (6 of them), the {0,1} pair +2, the
    // three pairs inside {2,3,4} +2 each: -6 + 2 + 6 = 2.
    assert_eq!(
        value(&|i, j| x.dist(i, j).clone()),
        Rational::from_integer(2)
    );
    // Every cut gives a nonpositive value: with s_+ and s_- the numbers of +1
    // and -1 points on one side, the value is -(s_+ - s_-)(1 - s_+ + s_-) <= 0
    // for integers. Checked on all 15 cuts.
    for c in all_cuts(5, 14).unwrap() {
        let v = value(&|i, j| Rational::from_integer(cut_metric(&c, i, j) as i64));
        assert!(!v.is_positive(), "cut {c} gives {v}");
    }
    assert_eq!(decompose(x.as_pseudometric()), Err(CutError::NotInCutCone));
}

#[test]
fn decomposition_choice_is_measured_not_assumed() {
    // The four-point equilateral space has two vertex decompositions with
    // different nesting chromatic numbers.
    let x =
        FiniteMetricSpace::from_integers([[0, 2, 2, 2], [2, 0, 2, 2], [2, 2, 0, 2], [2, 2, 2, 0]])
            .unwrap();
    let cuts = all_cuts(4, 14).unwrap();
    let identity: Vec<usize> = (0..cuts.len()).collect();
    let mut chis = BTreeSet::new();
    for order in [identity, small_side_first_order(&cuts)] {
        let dec = decompose_with_order(x.as_pseudometric(), &order, 14).unwrap();
        assert_eq!(evaluate_decomposition(&dec), *x.as_pseudometric());
        let h = build_nesting_hypergraph(&dec.cuts()).unwrap();
        chis.insert(hypergraph_chromatic_number(&h.hypergraph).0);
    }
    assert_eq!(chis, BTreeSet::from([2, 3]));
    assert_eq!(
        cross_validate(&x, &PipelineConfig::default())
            .unwrap()
            .dimension,
        Dimension::Embeddable(2)
    );
}
