//! Fixed cross-validation suite behind `l1embed selftest`.

use l1embed_core::{
    chromatic_number, chromatic_via_gh, clique_cover_number, clique_cover_via_gh, cross_validate,
    Dimension, FiniteMetricSpace, L1Error, PipelineConfig, TwoDistanceParams,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::gen;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub cases: usize,
    pub failures: usize,
    pub results: Vec<CaseResult>,
}

/// Some seeded five-point cut sums decompose with 13 triple edges.
pub const SELFTEST_FAMILY_BUDGET: usize = 14;

enum Case {
    Dimension {
        name: String,
        space: FiniteMetricSpace,
        expected: Option<Dimension>,
    },
    Graph {
        name: String,
        graph: l1embed_core::SimpleGraph,
    },
}

pub fn named_instances() -> Vec<(&'static str, FiniteMetricSpace, Dimension)> {
    let m = |rows: Vec<Vec<i64>>| {
        FiniteMetricSpace::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(Into::into).collect())
                .collect(),
        )
        .expect("named instance is a metric")
    };
    vec![
        (
            "path-1-1-2",
            m(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]),
            Dimension::Embeddable(1),
        ),
        (
            "triangle-2",
            m(vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0]]),
            Dimension::Embeddable(2),
        ),
        (
            "equilateral-4-2",
            m(vec![
                vec![0, 2, 2, 2],
                vec![2, 0, 2, 2],
                vec![2, 2, 0, 2],
                vec![2, 2, 2, 0],
            ]),
            Dimension::Embeddable(2),
        ),
        ("k23-path-metric", k23(), Dimension::NotEmbeddable),
    ]
}

/// Shortest-path metric of `K_{2,3}` with parts `{0,1}` and `{2,3,4}`.
pub fn k23() -> FiniteMetricSpace {
    FiniteMetricSpace::from_integers([
        [0, 2, 1, 1, 1],
        [2, 0, 1, 1, 1],
        [1, 1, 0, 2, 2],
        [1, 1, 2, 0, 2],
        [1, 1, 2, 2, 0],
    ])
    .expect("K_{2,3} path metric")
}

fn cases() -> Vec<Case> {
    let mut out: Vec<Case> = named_instances()
        .into_iter()
        .map(|(name, space, d)| Case::Dimension {
            name: name.into(),
            space,
            expected: Some(d),
        })
        .collect();
    let mut rng = gen::rng(2024);
    for (n, k) in [(3, 2), (3, 3), (4, 2), (4, 3), (4, 4), (5, 3), (5, 4)] {
        for i in 0..4 {
            let d = gen::cut_sum(n, k, true, &mut rng).expect("valid parameters");
            let space = d.to_metric().expect("separating cut sums are metrics");
            out.push(Case::Dimension {
                name: format!("cut-sum-n{n}-k{k}-{i}"),
                space,
                expected: None,
            });
        }
    }
    let max = l1embed_core::Rational::from_integer(12);
    for i in 0..12 {
        let space = gen::random_metric(4, &max, &mut rng).expect("valid parameters");
        out.push(Case::Dimension {
            name: format!("random-metric-n4-{i}"),
            space,
            expected: None,
        });
    }
    for i in 0..12 {
        let graph = gen::random_graph(5, 0.5, &mut rng).expect("valid parameters");
        out.push(Case::Graph {
            name: format!("random-graph-n5-{i}"),
            graph,
        });
    }
    out
}

fn run_case(case: &Case, cfg: &PipelineConfig) -> CaseResult {
    match case {
        Case::Dimension {
            name,
            space,
            expected,
        } => {
            let (ok, detail) = match cross_validate(space, cfg) {
                Ok(r) => {
                    let found = serde_json::to_string(&r.dimension).expect("serializable");
                    match expected {
                        Some(e) if *e != r.dimension => {
                            (false, format!("dimension {found}, expected {e:?}"))
                        }
                        _ => (true, format!("dimension {found}")),
                    }
                }
                Err(e @ L1Error::Disagreement { .. }) => (false, e.to_string()),
                Err(e) => (false, format!("error: {e}")),
            };
            CaseResult {
                name: name.clone(),
                ok,
                detail,
            }
        }
        Case::Graph { name, graph } => {
            let p = cfg.params.clone();
            let check = || -> Result<String, String> {
                let chi = chromatic_number(graph, cfg.chromatic_size_limit)
                    .map_err(|e| e.to_string())?
                    .chi;
                let chi_gh =
                    chromatic_via_gh(graph, &p, cfg.gh_size_limit).map_err(|e| e.to_string())?;
                let theta = clique_cover_number(graph, cfg.chromatic_size_limit)
                    .map_err(|e| e.to_string())?
                    .theta;
                let theta_gh =
                    clique_cover_via_gh(graph, &p, cfg.gh_size_limit).map_err(|e| e.to_string())?;
                if chi != chi_gh || theta != theta_gh {
                    return Err(format!(
                        "chi {chi} vs {chi_gh} via gh, theta {theta} vs {theta_gh} via gh"
                    ));
                }
                Ok(format!("chi {chi}, theta {theta}"))
            };
            let (ok, detail) = match check() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CaseResult {
                name: name.clone(),
                ok,
                detail,
            }
        }
    }
}

pub fn run(params: TwoDistanceParams, parallel: bool) -> SelftestReport {
    let cfg = PipelineConfig {
        params,
        parallel,
        family_budget: SELFTEST_FAMILY_BUDGET,
        ..PipelineConfig::default()
    };
    let cases = cases();
    let results: Vec<CaseResult> = if parallel {
        cases.par_iter().map(|c| run_case(c, &cfg)).collect()
    } else {
        cases.iter().map(|c| run_case(c, &cfg)).collect()
    };
    SelftestReport {
        cases: results.len(),
        failures: results.iter().filter(|r| !r.ok).count(),
        results,
    }
}
