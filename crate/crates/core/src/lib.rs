//! Exact l1-embeddability and l1-dimension of finite metric spaces.
//!
//! A finite metric embeds isometrically into some rectilinear space `R^m_1`
//! iff it is a nonnegative combination of cut pseudometrics; the least such
//! `m` is the chromatic number of the nesting hypergraph of the cuts. This
//! crate computes that number through simple-graph colorings and, equivalently,
//! through exact Gromov–Hausdorff distances between simplexes and two-distance
//! spaces, and builds an explicit embedding as a certificate.
//!
//! All arithmetic is exact over [`Rational`]; there are no tolerances.

pub mod chromatic;
pub mod cut;
pub mod gh;
pub mod graph;
pub mod io;
pub mod l1dim;
pub mod metric;
pub mod nesting;
pub mod rational;

pub use chromatic::{
    chromatic_number, chromatic_via_gh, clique_cover_number, clique_cover_via_gh,
    gh_color_bound_check, ChromaticError, CliqueCover, ColoringResult,
};
pub use cut::{
    all_cuts, cut_metric, decompose, decompose_with_limit, evaluate_decomposition, is_in_cut_cone,
    Cut, CutDecomposition, CutError,
};
pub use gh::{
    borsuk_partition, borsuk_partition_exists, distortion, gh_bounds, gh_distance_exact,
    gh_simplex_closed_form, twice_gh_distance, verify_borsuk_theorem, BorsukReport, Correspondence,
    GhError, GhResult,
};
pub use graph::{complement, SimpleGraph};
pub use l1dim::{
    cross_validate, embed_from_coloring, embeddable_in_dim, l1_dimension_via_coloring,
    l1_dimension_via_gh, Dimension, Embedding, L1Error, L1Report, PipelineConfig,
};
pub use metric::{
    diam, hausdorff_distance, simplex, two_distance_from_graph, validate_metric, AdjacentGets,
    FiniteMetricSpace, FinitePseudometricSpace, MetricError, TwoDistanceParams, ValidatedSpace,
};
pub use nesting::{
    asteroid_triplet, build_nesting_hypergraph, enumerate_graph_family, hypergraph_colorable,
    incompatible, GraphFamily, Hypergraph, NestingHypergraph,
};
pub use rational::Rational;
