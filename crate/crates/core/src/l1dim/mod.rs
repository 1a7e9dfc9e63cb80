//! The l1-dimension of a finite metric space, computed three ways from one
//! cut decomposition `d = sum lambda_c delta_c`:
//!
//! * **GH route**: the least `m` with `min_G 2 d_GH(a Delta_m, C_G) < b`,
//!   where `G` ranges over the graph family of the nesting hypergraph and
//!   `C_G` is the two-distance space on the cuts with adjacent cuts at `b`.
//! * **Coloring route**: `min_G chi(G)` over the same family, and the
//!   chromatic number of the nesting hypergraph itself.
//! * **Certificate**: an explicit embedding built from a hypergraph coloring.
//!
//! [`cross_validate`] runs all of them and fails loudly on any disagreement.

mod embed;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::chromatic::{chromatic_number, ChromaticError};
use crate::cut::{
    all_cuts, decompose_with_order, small_side_first_order, CutDecomposition, CutError,
    DEFAULT_MAX_CUT_POINTS,
};
use crate::gh::{twice_gh_distance, GhError};
use crate::graph::SimpleGraph;
use crate::metric::{
    simplex, two_distance_from_graph, AdjacentGets, FiniteMetricSpace, TwoDistanceParams,
};
use crate::nesting::{
    build_nesting_hypergraph, enumerate_graph_family, hypergraph_chromatic_number,
    hypergraph_colorable, GraphFamily, NestingError, NestingHypergraph, DEFAULT_FAMILY_BUDGET,
};
use crate::rational::Rational;

pub use embed::{embed_from_coloring, l1_distance, Embedding};

/// Default points-per-side limit for the GH solves inside the pipeline. The
/// cut spaces `C_G` have one point per cut, which exceeds the standalone
/// default of 8 already for five-point metrics.
pub const DEFAULT_PIPELINE_GH_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum L1Error {
    #[error("the metric is not in the cut cone (not l1-embeddable)")]
    NotInCutCone,
    #[error(transparent)]
    Cut(CutError),
    #[error(transparent)]
    Nesting(#[from] NestingError),
    #[error(transparent)]
    Gh(#[from] GhError),
    #[error(transparent)]
    Chromatic(#[from] ChromaticError),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("color class {color} has no linear realization: {cuts:?}")]
    NoLinearRealization { color: usize, cuts: Vec<String> },
    #[error("embedding gives |f({x}) - f({y})|_1 = {got}, expected {expected}")]
    EmbeddingMismatch {
        x: usize,
        y: usize,
        expected: Rational,
        got: Rational,
    },
    #[error("routes disagree: gh = {gh:?}, min graph chromatic = {graph_coloring:?}, hypergraph chromatic = {hypergraph:?}")]
    Disagreement {
        gh: Option<usize>,
        graph_coloring: Option<usize>,
        hypergraph: Option<usize>,
    },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl From<CutError> for L1Error {
    fn from(e: CutError) -> Self {
        match e {
            CutError::NotInCutCone => L1Error::NotInCutCone,
            other => L1Error::Cut(other),
        }
    }
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    NotInCutCone,
    BudgetExceeded,
    Internal,
}

impl L1Error {
    pub fn kind(&self) -> FailureKind {
        match self {
            L1Error::NotInCutCone => FailureKind::NotInCutCone,
            L1Error::Cut(CutError::TooManyPoints { .. })
            | L1Error::Nesting(NestingError::FamilyTooLarge { .. })
            | L1Error::Gh(GhError::SizeLimitExceeded { .. })
            | L1Error::Chromatic(ChromaticError::SizeLimitExceeded { .. })
            | L1Error::Chromatic(ChromaticError::Gh(GhError::SizeLimitExceeded { .. })) => {
                FailureKind::BudgetExceeded
            }
            _ => FailureKind::Internal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub params: TwoDistanceParams,
    pub gh_size_limit: usize,
    pub cut_point_limit: usize,
    pub family_budget: usize,
    pub chromatic_size_limit: usize,
    /// Evaluate per-graph solves on the rayon pool. Results are identical
    /// either way.
    pub parallel: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            params: TwoDistanceParams::default(),
            gh_size_limit: DEFAULT_PIPELINE_GH_LIMIT,
            cut_point_limit: DEFAULT_MAX_CUT_POINTS,
            family_budget: DEFAULT_FAMILY_BUDGET,
            chromatic_size_limit: 64,
            parallel: false,
        }
    }
}

impl PipelineConfig {
    fn map_graphs<T, F>(&self, graphs: &[SimpleGraph], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&SimpleGraph) -> T + Sync + Send,
    {
        if self.parallel {
            graphs.par_iter().map(f).collect()
        } else {
            graphs.iter().map(f).collect()
        }
    }
}

/// A decomposition together with its nesting hypergraph and graph family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutStructure {
    pub decomposition: CutDecomposition,
    pub nesting: NestingHypergraph,
    pub family: GraphFamily,
    /// One family index per isomorphism class, ascending. The GH distance
    /// from a simplex to `C_G` only depends on the class of `G`.
    pub class_representatives: Vec<usize>,
}

/// Bound on relabelings tried per graph when computing isomorphism keys.
const MAX_RELABELINGS: usize = 40_320;

impl CutStructure {
    pub fn from_decomposition(
        dec: CutDecomposition,
        cfg: &PipelineConfig,
    ) -> Result<Self, L1Error> {
        let nesting = build_nesting_hypergraph(&dec.cuts())?;
        Self::build(dec, nesting, cfg)
    }

    fn build(
        decomposition: CutDecomposition,
        nesting: NestingHypergraph,
        cfg: &PipelineConfig,
    ) -> Result<Self, L1Error> {
        let family = enumerate_graph_family(&nesting.hypergraph, cfg.family_budget)?;
        let keys = cfg.map_graphs(family.graphs(), |g| g.isomorphism_key(MAX_RELABELINGS));
        let mut seen = BTreeSet::new();
        let class_representatives = keys
            .into_iter()
            .enumerate()
            .filter(|(_, k)| k.is_none() || seen.insert(*k))
            .map(|(i, _)| i)
            .collect();
        Ok(CutStructure {
            decomposition,
            nesting,
            family,
            class_representatives,
        })
    }

    pub fn cut_count(&self) -> usize {
        self.decomposition.len()
    }
}

/// Decomposes `x` and builds the nesting structure.
///
/// Decompositions are not unique, and each one yields an embedding with as
/// many axes as its nesting hypergraph needs colors. Two LP column orders are
/// tried (bitmask order, then small sides first) and the decomposition with
/// the fewest colors is kept, ties broken by fewer triple edges, fewer cuts,
/// then the earlier order.
pub fn analyze(x: &FiniteMetricSpace, cfg: &PipelineConfig) -> Result<CutStructure, L1Error> {
    let d = x.as_pseudometric();
    let cuts = all_cuts(x.len(), cfg.cut_point_limit)?;
    let identity: Vec<usize> = (0..cuts.len()).collect();
    let mut best: Option<((usize, usize, usize), CutDecomposition, NestingHypergraph)> = None;
    for order in [identity, small_side_first_order(&cuts)] {
        let dec = decompose_with_order(d, &order, cfg.cut_point_limit)?;
        if best.as_ref().is_some_and(|(_, b, _)| *b == dec) {
            continue;
        }
        let nesting = build_nesting_hypergraph(&dec.cuts())?;
        let h = &nesting.hypergraph;
        let key = (
            hypergraph_chromatic_number(h).0,
            h.triple_count(),
            dec.len(),
        );
        if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
            best = Some((key, dec, nesting));
        }
    }
    let (_, decomposition, nesting) = best.expect("at least one order");
    CutStructure::build(decomposition, nesting, cfg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhScanRow {
    pub m: usize,
    /// `min_G 2 d_GH(a Delta_m, C_G)`.
    pub min_twice_gh: Rational,
    pub below_b: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhRoute {
    pub rows: Vec<GhScanRow>,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringRoute {
    pub min_graph_chromatic: usize,
    pub hypergraph_chromatic: usize,
    /// A hypergraph coloring with `hypergraph_chromatic` colors, indexed by cut.
    pub coloring: Vec<usize>,
}

/// `min_G 2 d_GH(a Delta_m, C_G)` over the family, one graph per isomorphism class.
fn min_twice_gh(s: &CutStructure, m: usize, cfg: &PipelineConfig) -> Result<Rational, L1Error> {
    let p = &cfg.params;
    let sim = simplex(m, p.a()).expect("a > 0");
    let graphs: Vec<SimpleGraph> = s
        .class_representatives
        .iter()
        .map(|&i| s.family.graphs()[i].clone())
        .collect();
    let values = cfg.map_graphs(&graphs, |g| {
        let space = two_distance_from_graph(g, p, AdjacentGets::B);
        twice_gh_distance(&sim, &space, cfg.gh_size_limit)
    });
    let mut best: Option<Rational> = None;
    for v in values {
        let v = v?;
        if v > *p.b() {
            return Err(L1Error::InvariantViolation(format!(
                "2 d_GH(a Delta_{m}, C_G) = {v} exceeds b"
            )));
        }
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("family is nonempty"))
}

/// Scans `m = 1..=#C` and reports the least `m` below `b`. The whole range
/// is evaluated so that upward closure of the below-`b` set can be checked.
pub fn gh_route(s: &CutStructure, cfg: &PipelineConfig) -> Result<GhRoute, L1Error> {
    let k = s.cut_count();
    if k == 0 {
        // A single point: no cuts, and the line already holds it.
        return Ok(GhRoute {
            rows: Vec::new(),
            dimension: 1,
        });
    }
    let mut rows = Vec::with_capacity(k);
    for m in 1..=k {
        let v = min_twice_gh(s, m, cfg)?;
        let below_b = v < *cfg.params.b();
        rows.push(GhScanRow {
            m,
            min_twice_gh: v,
            below_b,
        });
    }
    let dimension = rows
        .iter()
        .find(|r| r.below_b)
        .map(|r| r.m)
        .ok_or_else(|| L1Error::InvariantViolation(format!("no m <= {k} has min 2 d_GH < b")))?;
    if rows[dimension - 1..].iter().any(|r| !r.below_b) {
        return Err(L1Error::InvariantViolation(format!(
            "the set of m with min 2 d_GH < b is not upward closed: {rows:?}"
        )));
    }
    Ok(GhRoute { rows, dimension })
}

pub fn coloring_route(s: &CutStructure, cfg: &PipelineConfig) -> Result<ColoringRoute, L1Error> {
    if s.cut_count() == 0 {
        return Ok(ColoringRoute {
            min_graph_chromatic: 1,
            hypergraph_chromatic: 1,
            coloring: Vec::new(),
        });
    }
    let chis = cfg.map_graphs(s.family.graphs(), |g| {
        chromatic_number(g, cfg.chromatic_size_limit)
    });
    let mut min_graph_chromatic = usize::MAX;
    for chi in chis {
        min_graph_chromatic = min_graph_chromatic.min(chi?.chi);
    }
    let (hypergraph_chromatic, coloring) = hypergraph_chromatic_number(&s.nesting.hypergraph);
    if hypergraph_chromatic != min_graph_chromatic {
        return Err(L1Error::Disagreement {
            gh: None,
            graph_coloring: Some(min_graph_chromatic),
            hypergraph: Some(hypergraph_chromatic),
        });
    }
    Ok(ColoringRoute {
        min_graph_chromatic,
        hypergraph_chromatic,
        coloring,
    })
}

/// `dimension` serializes as a number or the string `"not_embeddable"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Embeddable(usize),
    NotEmbeddable,
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Dimension::Embeddable(m) => serializer.serialize_u64(*m as u64),
            Dimension::NotEmbeddable => serializer.serialize_str("not_embeddable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct L1Report {
    pub dimension: Dimension,
    pub in_cut_cone: bool,
    pub a: Rational,
    pub b: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_used: Option<CutDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nesting: Option<NestingHypergraph>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_gh: Option<GhRoute>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_coloring: Option<ColoringRoute>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Embedding>,
}

impl L1Report {
    fn empty(cfg: &PipelineConfig, dimension: Dimension) -> Self {
        L1Report {
            dimension,
            in_cut_cone: dimension != Dimension::NotEmbeddable,
            a: cfg.params.a().clone(),
            b: cfg.params.b().clone(),
            decomposition_used: None,
            nesting: None,
            family_size: None,
            route_gh: None,
            route_coloring: None,
            embedding: None,
        }
    }

    fn with_structure(cfg: &PipelineConfig, dimension: usize, s: &CutStructure) -> Self {
        L1Report {
            decomposition_used: Some(s.decomposition.clone()),
            nesting: Some(s.nesting.clone()),
            family_size: Some(s.family.len()),
            ..Self::empty(cfg, Dimension::Embeddable(dimension))
        }
    }
}

/// The least `m` with `min_G 2 d_GH(a Delta_m, C_G) < b`.
pub fn l1_dimension_via_gh(
    x: &FiniteMetricSpace,
    cfg: &PipelineConfig,
) -> Result<L1Report, L1Error> {
    let s = analyze(x, cfg)?;
    let route = gh_route(&s, cfg)?;
    let mut report = L1Report::with_structure(cfg, route.dimension, &s);
    report.route_gh = Some(route);
    Ok(report)
}

/// `min_G chi(G)` over the graph family, cross-checked against the
/// hypergraph chromatic number.
pub fn l1_dimension_via_coloring(
    x: &FiniteMetricSpace,
    cfg: &PipelineConfig,
) -> Result<usize, L1Error> {
    let s = analyze(x, cfg)?;
    Ok(coloring_route(&s, cfg)?.min_graph_chromatic)
}

/// Coloring route with its embedding certificate.
pub fn coloring_report(x: &FiniteMetricSpace, cfg: &PipelineConfig) -> Result<L1Report, L1Error> {
    let s = analyze(x, cfg)?;
    let route = coloring_route(&s, cfg)?;
    let embedding = certificate(x, &s, &route)?;
    let mut report = L1Report::with_structure(cfg, route.hypergraph_chromatic, &s);
    report.route_coloring = Some(route);
    report.embedding = Some(embedding);
    Ok(report)
}

fn certificate(
    x: &FiniteMetricSpace,
    s: &CutStructure,
    route: &ColoringRoute,
) -> Result<Embedding, L1Error> {
    if s.cut_count() == 0 {
        return Ok(Embedding {
            coordinates: vec![vec![Rational::zero()]; x.len()],
            axis_orders: vec![vec![0]],
        });
    }
    let e = embed_from_coloring(
        &s.decomposition,
        &route.coloring,
        route.hypergraph_chromatic,
    )?;
    // Exact agreement with the original metric, not just the decomposition.
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            let got = l1_distance(&e.coordinates[i], &e.coordinates[j]);
            if got != *x.dist(i, j) {
                return Err(L1Error::EmbeddingMismatch {
                    x: i,
                    y: j,
                    expected: x.dist(i, j).clone(),
                    got,
                });
            }
        }
    }
    Ok(e)
}

/// Whether `x` embeds into `m`-dimensional rectilinear space: the nesting
/// hypergraph is `m`-colorable. Cross-checked against the GH criterion.
pub fn embeddable_in_dim(
    x: &FiniteMetricSpace,
    m: usize,
    cfg: &PipelineConfig,
) -> Result<bool, L1Error> {
    if m == 0 {
        return Ok(false);
    }
    let s = analyze(x, cfg)?;
    embeddable_in_dim_for(&s, m, cfg)
}

pub fn embeddable_in_dim_for(
    s: &CutStructure,
    m: usize,
    cfg: &PipelineConfig,
) -> Result<bool, L1Error> {
    if m == 0 {
        return Ok(false);
    }
    let colorable = hypergraph_colorable(&s.nesting.hypergraph, m).is_some();
    if s.cut_count() == 0 {
        return Ok(colorable);
    }
    let by_gh = min_twice_gh(s, m, cfg)? < *cfg.params.b();
    if by_gh != colorable {
        return Err(L1Error::InvariantViolation(format!(
            "m = {m}: hypergraph colorable = {colorable}, GH criterion = {by_gh}"
        )));
    }
    Ok(colorable)
}

/// Runs every route and the embedding certificate and requires them to agree.
/// A metric outside the cut cone yields a `NotEmbeddable` report.
pub fn cross_validate(x: &FiniteMetricSpace, cfg: &PipelineConfig) -> Result<L1Report, L1Error> {
    let s = match analyze(x, cfg) {
        Ok(s) => s,
        Err(L1Error::NotInCutCone) => return Ok(L1Report::empty(cfg, Dimension::NotEmbeddable)),
        Err(e) => return Err(e),
    };
    let gh = gh_route(&s, cfg)?;
    let coloring = coloring_route(&s, cfg)?;
    if gh.dimension != coloring.min_graph_chromatic || gh.dimension != coloring.hypergraph_chromatic
    {
        return Err(L1Error::Disagreement {
            gh: Some(gh.dimension),
            graph_coloring: Some(coloring.min_graph_chromatic),
            hypergraph: Some(coloring.hypergraph_chromatic),
        });
    }
    let dimension = gh.dimension;
    if dimension >= 2 && hypergraph_colorable(&s.nesting.hypergraph, dimension - 1).is_some() {
        return Err(L1Error::InvariantViolation(format!(
            "{} colors already suffice",
            dimension - 1
        )));
    }
    let embedding = certificate(x, &s, &coloring)?;
    if embedding.dimension() != dimension {
        return Err(L1Error::InvariantViolation(format!(
            "embedding has {} axes for dimension {dimension}",
            embedding.dimension()
        )));
    }
    let mut report = L1Report::with_structure(cfg, dimension, &s);
    report.route_gh = Some(gh);
    report.route_coloring = Some(coloring);
    report.embedding = Some(embedding);
    Ok(report)
}
