//! Exact chromatic and clique cover numbers, computed directly and through
//! Gromov–Hausdorff distances from simplexes to two-distance spaces.

use serde::Serialize;

use crate::gh::{twice_gh_distance, GhError};
use crate::graph::SimpleGraph;
use crate::metric::{
    simplex, two_distance_from_graph, AdjacentGets, FiniteMetricSpace, TwoDistanceParams,
};
use crate::rational::Rational;

/// Default vertex bound for the direct coloring search.
pub const DEFAULT_CHROMATIC_SIZE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChromaticError {
    #[error("graph has {n} vertices, limit is {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error(transparent)]
    Gh(#[from] GhError),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

/// Chromatic number with a coloring that uses exactly `chi` colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringResult {
    pub chi: usize,
    pub coloring: Vec<usize>,
}

/// Whether `coloring` is a proper coloring of `g`.
pub fn is_proper_coloring(g: &SimpleGraph, coloring: &[usize]) -> bool {
    coloring.len() == g.vertex_count() && g.edges().all(|(u, v)| coloring[u] != coloring[v])
}

struct Colorer {
    adj: Vec<u64>,
    order: Vec<usize>,
}

impl Colorer {
    fn new(g: &SimpleGraph) -> Self {
        let adj = g.adjacency_masks();
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
        Colorer { adj, order }
    }

    fn greedy(&self) -> Vec<usize> {
        let mut classes: Vec<u64> = Vec::new();
        let mut colors = vec![0; self.adj.len()];
        for &v in &self.order {
            let c = classes
                .iter()
                .position(|&cls| cls & self.adj[v] == 0)
                .unwrap_or_else(|| {
                    classes.push(0);
                    classes.len() - 1
                });
            classes[c] |= 1 << v;
            colors[v] = c;
        }
        colors
    }

    fn max_clique(&self) -> usize {
        fn grow(adj: &[u64], cand: u64, size: usize, best: &mut usize) {
            if cand == 0 {
                *best = (*best).max(size);
                return;
            }
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let mut rest = cand;
            while rest != 0 {
                if size + rest.count_ones() as usize <= *best {
                    return;
                }
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grow(adj, rest & adj[v], size + 1, best);
            }
        }
        let n = self.adj.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = 0;
        grow(&self.adj, all, 0, &mut best);
        best
    }

    fn color_with(&self, k: usize) -> Option<Vec<usize>> {
        let mut classes = vec![0u64; k];
        let mut colors = vec![0; self.adj.len()];
        fn go(
            s: &Colorer,
            i: usize,
            used: usize,
            classes: &mut [u64],
            colors: &mut [usize],
        ) -> bool {
            if i == s.order.len() {
                return true;
            }
            let v = s.order[i];
            for c in 0..classes.len().min(used + 1) {
                if classes[c] & s.adj[v] == 0 {
                    classes[c] |= 1 << v;
                    colors[v] = c;
                    if go(s, i + 1, used.max(c + 1), classes, colors) {
                        return true;
                    }
                    classes[c] &= !(1 << v);
                }
            }
            false
        }
        go(self, 0, 0, &mut classes, &mut colors).then_some(colors)
    }
}

/// Exact chromatic number: greedy upper bound, clique lower bound, then
/// backtracking for each candidate in between.
pub fn chromatic_number(
    g: &SimpleGraph,
    size_limit: usize,
) -> Result<ColoringResult, ChromaticError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(ChromaticError::EmptyGraph);
    }
    if n > size_limit.min(64) {
        return Err(ChromaticError::SizeLimitExceeded {
            n,
            limit: size_limit,
        });
    }
    let colorer = Colorer::new(g);
    let greedy = colorer.greedy();
    let upper = greedy.iter().max().unwrap() + 1;
    let lower = colorer.max_clique().max(1);
    for k in lower..upper {
        if let Some(coloring) = colorer.color_with(k) {
            return Ok(ColoringResult { chi: k, coloring });
        }
    }
    Ok(ColoringResult {
        chi: upper,
        coloring: greedy,
    })
}

/// Minimum clique cover: the color classes of an optimal coloring of the
/// complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueCover {
    pub theta: usize,
    pub cliques: Vec<Vec<usize>>,
}

pub fn clique_cover_number(
    g: &SimpleGraph,
    size_limit: usize,
) -> Result<CliqueCover, ChromaticError> {
    let res = chromatic_number(&g.complement(), size_limit)?;
    let mut cliques = vec![Vec::new(); res.chi];
    for (v, &c) in res.coloring.iter().enumerate() {
        cliques[c].push(v);
    }
    for clique in &cliques {
        let is_clique = clique
            .iter()
            .enumerate()
            .all(|(i, &u)| clique[i + 1..].iter().all(|&v| g.has_edge(u, v)));
        if !is_clique {
            return Err(ChromaticError::InvariantViolation(format!(
                "cover part {clique:?} is not a clique"
            )));
        }
    }
    Ok(CliqueCover {
        theta: res.chi,
        cliques,
    })
}

/// `2 d_GH(a * Delta_k, V)` for `k = 1..=#V`.
pub fn simplex_scan(
    space: &FiniteMetricSpace,
    a: &Rational,
    gh_limit: usize,
) -> Result<Vec<Rational>, GhError> {
    (1..=space.len())
        .map(|k| twice_gh_distance(&simplex(k, a).expect("a > 0"), space, gh_limit))
        .collect()
}

/// Number `m` of leading scan entries equal to `b`, after checking that no
/// entry exceeds `b` and that the entries equal to `b` form a prefix.
fn threshold_count(scan: &[Rational], b: &Rational) -> Result<usize, ChromaticError> {
    if let Some(v) = scan.iter().find(|v| *v > b) {
        return Err(ChromaticError::InvariantViolation(format!(
            "2 d_GH = {v} exceeds b = {b}"
        )));
    }
    let m = scan.iter().take_while(|v| *v == b).count();
    if scan[m..].iter().any(|v| v == b) {
        return Err(ChromaticError::InvariantViolation(format!(
            "threshold scan is not monotone: {scan:?} against b = {b}"
        )));
    }
    Ok(m)
}

fn via_gh(
    g: &SimpleGraph,
    p: &TwoDistanceParams,
    mode: AdjacentGets,
    gh_limit: usize,
) -> Result<usize, ChromaticError> {
    if g.vertex_count() == 0 {
        return Err(ChromaticError::EmptyGraph);
    }
    let space = two_distance_from_graph(g, p, mode);
    let scan = simplex_scan(&space, p.a(), gh_limit)?;
    // For k > #V the simplex closed form gives max(a, diam - a) = a < b, so
    // the scan over 1..=#V sees every k with equality.
    Ok(threshold_count(&scan, p.b())? + 1)
}

/// Chromatic number as one plus the greatest `k` with
/// `2 d_GH(a * Delta_k, V) = b`, where adjacent vertices of `V` are at
/// distance `b` and the others at distance `a`.
pub fn chromatic_via_gh(
    g: &SimpleGraph,
    p: &TwoDistanceParams,
    gh_limit: usize,
) -> Result<usize, ChromaticError> {
    via_gh(g, p, AdjacentGets::B, gh_limit)
}

/// Clique cover number by the same scan with adjacent vertices at distance `a`.
pub fn clique_cover_via_gh(
    g: &SimpleGraph,
    p: &TwoDistanceParams,
    gh_limit: usize,
) -> Result<usize, ChromaticError> {
    via_gh(g, p, AdjacentGets::A, gh_limit)
}

/// Whether `2 d_GH(a * Delta_k, V_b) = b`; when it holds, `chi(G) > k` is
/// checked against the direct search.
pub fn gh_color_bound_check(
    g: &SimpleGraph,
    k: usize,
    p: &TwoDistanceParams,
    gh_limit: usize,
) -> Result<bool, ChromaticError> {
    if k == 0 {
        return Err(GhError::PreconditionViolated("k must be positive".into()).into());
    }
    let space = two_distance_from_graph(g, p, AdjacentGets::B);
    let twice = twice_gh_distance(&simplex(k, p.a()).expect("a > 0"), &space, gh_limit)?;
    let equal = twice == *p.b();
    if equal {
        let chi = chromatic_number(g, DEFAULT_CHROMATIC_SIZE_LIMIT)?.chi;
        if chi <= k {
            return Err(ChromaticError::InvariantViolation(format!(
                "2 d_GH(a Delta_{k}, V) = b but chi = {chi}"
            )));
        }
    }
    Ok(equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIMIT: usize = DEFAULT_CHROMATIC_SIZE_LIMIT;

    /// Oracle: smallest k such that some assignment in k^n is proper.
    fn brute_chromatic(g: &SimpleGraph) -> usize {
        let n = g.vertex_count();
        (1..=n)
            .find(|&k| {
                (0..k.pow(n as u32)).any(|code| {
                    let colors: Vec<usize> = (0..n).map(|v| code / k.pow(v as u32) % k).collect();
                    is_proper_coloring(g, &colors)
                })
            })
            .unwrap()
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(
            chromatic_number(&SimpleGraph::empty(5), LIMIT).unwrap().chi,
            1
        );
        assert_eq!(
            chromatic_number(&SimpleGraph::complete(3), LIMIT)
                .unwrap()
                .chi,
            3
        );
        let c5 = SimpleGraph::cycle(5);
        let r = chromatic_number(&c5, LIMIT).unwrap();
        assert_eq!(r.chi, 3);
        assert!(is_proper_coloring(&c5, &r.coloring));
        assert_eq!(brute_chromatic(&c5), 3);
    }

    #[test]
    fn chromatic_matches_brute_force_on_all_small_graphs() {
        for n in 1..=5 {
            for mask in 0..(1u64 << (n * (n - 1) / 2)) {
                let g = SimpleGraph::from_pair_mask(n, mask);
                let r = chromatic_number(&g, LIMIT).unwrap();
                assert_eq!(r.chi, brute_chromatic(&g), "{g:?}");
                assert!(is_proper_coloring(&g, &r.coloring));
                assert_eq!(r.coloring.iter().max().unwrap() + 1, r.chi);
            }
        }
    }

    #[test]
    fn chromatic_errors() {
        assert_eq!(
            chromatic_number(&SimpleGraph::empty(0), LIMIT),
            Err(ChromaticError::EmptyGraph)
        );
        assert_eq!(
            chromatic_number(&SimpleGraph::empty(17), LIMIT),
            Err(ChromaticError::SizeLimitExceeded { n: 17, limit: 16 })
        );
    }

    #[test]
    fn clique_cover_examples() {
        assert_eq!(
            clique_cover_number(&SimpleGraph::complete(5), LIMIT)
                .unwrap()
                .theta,
            1
        );
        assert_eq!(
            clique_cover_number(&SimpleGraph::empty(4), LIMIT)
                .unwrap()
                .theta,
            4
        );
        let c = clique_cover_number(&SimpleGraph::cycle(5), LIMIT).unwrap();
        assert_eq!(c.theta, 3);
        let mut covered: Vec<usize> = c.cliques.concat();
        covered.sort();
        assert_eq!(covered, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn via_gh_examples() {
        let p = TwoDistanceParams::default();
        assert_eq!(chromatic_via_gh(&SimpleGraph::empty(3), &p, 8).unwrap(), 1);
        assert_eq!(
            chromatic_via_gh(&SimpleGraph::complete(2), &p, 8).unwrap(),
            2
        );
        assert_eq!(chromatic_via_gh(&SimpleGraph::cycle(5), &p, 8).unwrap(), 3);

        assert_eq!(
            clique_cover_via_gh(&SimpleGraph::complete(3), &p, 8).unwrap(),
            1
        );
        assert_eq!(
            clique_cover_via_gh(&SimpleGraph::empty(3), &p, 8).unwrap(),
            3
        );
        assert_eq!(
            clique_cover_via_gh(&SimpleGraph::path(3), &p, 8).unwrap(),
            2
        );
    }

    #[test]
    fn single_vertex_graph() {
        let p = TwoDistanceParams::default();
        let g = SimpleGraph::empty(1);
        assert_eq!(chromatic_via_gh(&g, &p, 8).unwrap(), 1);
        assert_eq!(clique_cover_via_gh(&g, &p, 8).unwrap(), 1);
    }

    #[test]
    fn color_bound_examples() {
        let p = TwoDistanceParams::default();
        assert!(gh_color_bound_check(&SimpleGraph::complete(3), 2, &p, 8).unwrap());
        assert!(!gh_color_bound_check(&SimpleGraph::complete(2), 2, &p, 8).unwrap());
        assert!(gh_color_bound_check(&SimpleGraph::path(4), 1, &p, 8).unwrap());
    }

    #[test]
    fn threshold_count_rejects_non_monotone_scans() {
        let b = Rational::from_integer(2);
        let scan = vec![b.clone(), Rational::one(), b.clone()];
        assert!(matches!(
            threshold_count(&scan, &b),
            Err(ChromaticError::InvariantViolation(_))
        ));
        let scan = vec![Rational::from_integer(3)];
        assert!(matches!(
            threshold_count(&scan, &b),
            Err(ChromaticError::InvariantViolation(_))
        ));
        assert_eq!(
            threshold_count(&[b.clone(), b.clone(), Rational::one()], &b),
            Ok(2)
        );
    }
}
