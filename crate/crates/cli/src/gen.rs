//! Seeded instance generators. Every generator draws from a ChaCha stream
//! keyed by the seed alone, so documents are reproducible byte for byte.

use l1embed_core::cut::DEFAULT_MAX_CUT_POINTS;
use l1embed_core::io::MetricDoc;
use l1embed_core::{
    all_cuts, evaluate_decomposition, simplex, two_distance_from_graph, AdjacentGets, Cut,
    CutDecomposition, FiniteMetricSpace, FinitePseudometricSpace, Rational, SimpleGraph,
    TwoDistanceParams,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad generator parameters: {0}")]
pub struct BadParams(pub String);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k / q` with `k` in `1..=max_numer` and `q` in `1..=4`.
pub fn random_positive_rational(rng: &mut impl Rng, max_numer: i64) -> Rational {
    Rational::new(rng.gen_range(1..=max_numer), rng.gen_range(1..=4))
}

/// Random positive entries clamped to `max`, then closed under shortest
/// paths. The closure keeps entries positive, so the result is a metric.
pub fn random_metric(
    n: usize,
    max: &Rational,
    rng: &mut impl Rng,
) -> Result<FiniteMetricSpace, BadParams> {
    if n == 0 {
        return Err(BadParams("random-metric needs n >= 1".into()));
    }
    if !max.is_positive() {
        return Err(BadParams("random-metric needs a positive max entry".into()));
    }
    let mut d = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = random_positive_rational(rng, 12).min(max.clone());
            d[i][j] = w.clone();
            d[j][i] = w;
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
    Ok(FiniteMetricSpace::new(d).expect("shortest-path closure of positive weights is a metric"))
}

/// Each edge independently with probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Result<SimpleGraph, BadParams> {
    if !(0.0..=1.0).contains(&p) {
        return Err(BadParams(format!("edge probability {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(SimpleGraph::new(n, edges).expect("generated edges are simple"))
}

/// `k` distinct cuts with random positive weights. When `separating` is set
/// the family is redrawn until every pair of points is split by some cut,
/// which makes the evaluated pseudometric a metric.
pub fn random_decomposition(
    n: usize,
    k: usize,
    separating: bool,
    rng: &mut impl Rng,
) -> Result<CutDecomposition, BadParams> {
    let cuts = all_cuts(n, DEFAULT_MAX_CUT_POINTS).map_err(|e| BadParams(e.to_string()))?;
    if k > cuts.len() {
        return Err(BadParams(format!(
            "{n} points have only {} cuts, asked for {k}",
            cuts.len()
        )));
    }
    if separating && n > 1 && (k >= usize::BITS as usize - 1 || (1usize << k) < n) {
        return Err(BadParams(format!("{k} cuts cannot separate {n} points")));
    }
    loop {
        let mut chosen: Vec<Cut> = cuts.choose_multiple(rng, k).copied().collect();
        chosen.sort();
        let separates_all =
            (0..n).all(|i| ((i + 1)..n).all(|j| chosen.iter().any(|c| c.separates(i, j))));
        if separating && !separates_all {
            continue;
        }
        let terms = chosen
            .into_iter()
            .map(|c| (c, random_positive_rational(rng, 6)))
            .collect();
        return Ok(CutDecomposition::new(n, terms).expect("distinct cuts with positive weights"));
    }
}

pub fn cut_sum(
    n: usize,
    k: usize,
    separating: bool,
    rng: &mut impl Rng,
) -> Result<FinitePseudometricSpace, BadParams> {
    Ok(evaluate_decomposition(&random_decomposition(
        n, k, separating, rng,
    )?))
}

pub fn simplex_doc(m: usize, lambda: &Rational) -> Result<MetricDoc, BadParams> {
    let s = simplex(m, lambda).map_err(|e| BadParams(e.to_string()))?;
    Ok(MetricDoc::from_space(s.as_pseudometric()))
}

pub fn two_distance_doc(g: &SimpleGraph, p: &TwoDistanceParams) -> MetricDoc {
    MetricDoc::from_space(two_distance_from_graph(g, p, AdjacentGets::B).as_pseudometric())
}
