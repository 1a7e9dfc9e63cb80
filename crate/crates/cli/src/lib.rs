//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests can drive it in-process and compare bytes.

pub mod gen;
pub mod selftest;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use l1embed_core::chromatic::ChromaticError;
use l1embed_core::cut::{CutError, DEFAULT_MAX_CUT_POINTS};
use l1embed_core::gh::{lambda_grid, DEFAULT_GH_SIZE_LIMIT};
use l1embed_core::io::{self, IoError, MetricDoc};
use l1embed_core::l1dim::{coloring_report, FailureKind, DEFAULT_PIPELINE_GH_LIMIT};
use l1embed_core::nesting::{NestingError, DEFAULT_FAMILY_BUDGET};
use l1embed_core::{
    build_nesting_hypergraph, chromatic_number, chromatic_via_gh, clique_cover_number,
    clique_cover_via_gh, cross_validate, decompose_with_limit, enumerate_graph_family,
    gh_distance_exact, l1_dimension_via_gh, verify_borsuk_theorem, CutDecomposition, Dimension,
    FiniteMetricSpace, GhError, L1Error, MetricError, PipelineConfig, Rational, TwoDistanceParams,
    ValidatedSpace,
};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_IN_CUT_CONE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "l1embed",
    version,
    about = "Exact l1-dimension of finite metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a distance matrix against the metric axioms.
    Validate {
        metric: PathBuf,
        /// Accept zero distances between distinct points.
        #[arg(long)]
        pseudo: bool,
    },
    /// Diameter of a metric space.
    Diam { metric: PathBuf },
    /// Exact Gromov-Hausdorff distance with an optimal correspondence.
    Gh {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GH_SIZE_LIMIT)]
        budget_gh: usize,
    },
    /// Partition criterion against 2 d_GH(lambda Delta_m, X) < diam X.
    Borsuk {
        metric: PathBuf,
        #[arg(long)]
        m: usize,
        /// Scale of the simplex; defaults to the grid diam * k/8, k = 1..7.
        #[arg(long)]
        lambda: Option<Rational>,
        #[arg(long, default_value_t = DEFAULT_GH_SIZE_LIMIT)]
        budget_gh: usize,
    },
    /// Exact decomposition into weighted cut pseudometrics.
    CutDecompose {
        metric: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_CUT_POINTS)]
        budget_cuts: usize,
    },
    /// Nesting hypergraph of a decomposition (or of a metric's decomposition).
    Nesting {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_CUT_POINTS)]
        budget_cuts: usize,
    },
    /// Graph family of the nesting hypergraph.
    GraphFamily {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_CUT_POINTS)]
        budget_cuts: usize,
        #[arg(long, default_value_t = DEFAULT_FAMILY_BUDGET)]
        budget_family: usize,
    },
    /// Chromatic number of a graph.
    Chromatic {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Direct)]
        via: Via,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_PIPELINE_GH_LIMIT)]
        budget_gh: usize,
    },
    /// Clique cover number of a graph.
    CliqueCover {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Direct)]
        via: Via,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_PIPELINE_GH_LIMIT)]
        budget_gh: usize,
    },
    /// l1-dimension report.
    L1dim {
        metric: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Route::All)]
        route: Route,
        #[command(flatten)]
        budgets: PipelineArgs,
    },
    /// Built-in cross-validation suite.
    Selftest {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        parallel: bool,
    },
    /// Seeded instance generator.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Number of cuts for `cut-sum`.
        #[arg(long, default_value_t = 3)]
        cuts: usize,
        /// Only emit cut sums whose cuts separate every pair of points.
        #[arg(long)]
        separating: bool,
        /// Simplex size.
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value = "1")]
        lambda: Rational,
        /// Edge probability for `random-graph` and `two-distance`.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Largest off-diagonal entry before the shortest-path closure.
        #[arg(long, default_value = "12")]
        max: Rational,
        /// Graph document for `two-distance`; random when absent.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value = "1")]
    pub a: Rational,
    #[arg(long, default_value = "2")]
    pub b: Rational,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[arg(long, default_value_t = DEFAULT_PIPELINE_GH_LIMIT)]
    pub budget_gh: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_CUT_POINTS)]
    pub budget_cuts: usize,
    #[arg(long, default_value_t = DEFAULT_FAMILY_BUDGET)]
    pub budget_family: usize,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Via {
    Gh,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Gh,
    Coloring,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    RandomMetric,
    RandomGraph,
    TwoDistance,
    Simplex,
    CutSum,
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl ToString) -> Self {
        CliError {
            code,
            message: message.to_string(),
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(EXIT_INPUT, e)
            }
        }
    )*};
}

input_error!(IoError, MetricError, gen::BadParams);

impl From<GhError> for CliError {
    fn from(e: GhError) -> Self {
        match e {
            GhError::SizeLimitExceeded { .. } => CliError::new(EXIT_BUDGET, e),
            _ => CliError::new(EXIT_INPUT, e),
        }
    }
}

impl From<ChromaticError> for CliError {
    fn from(e: ChromaticError) -> Self {
        match e {
            ChromaticError::Gh(g) => g.into(),
            ChromaticError::SizeLimitExceeded { .. } => CliError::new(EXIT_BUDGET, e),
            ChromaticError::EmptyGraph => CliError::new(EXIT_INPUT, e),
            ChromaticError::InvariantViolation(_) => CliError::new(EXIT_INTERNAL, e),
        }
    }
}

impl From<CutError> for CliError {
    fn from(e: CutError) -> Self {
        L1Error::from(e).into()
    }
}

impl From<NestingError> for CliError {
    fn from(e: NestingError) -> Self {
        L1Error::from(e).into()
    }
}

impl From<L1Error> for CliError {
    fn from(e: L1Error) -> Self {
        let code = match e.kind() {
            FailureKind::NotInCutCone => EXIT_NOT_IN_CUT_CONE,
            FailureKind::BudgetExceeded => EXIT_BUDGET,
            FailureKind::Internal => match &e {
                L1Error::Cut(_) | L1Error::Nesting(_) => EXIT_INPUT,
                L1Error::Gh(GhError::PreconditionViolated(_) | GhError::BadCardinality { .. }) => {
                    EXIT_INPUT
                }
                _ => EXIT_INTERNAL,
            },
        };
        CliError::new(code, e)
    }
}

type CmdResult = Result<(Value, String, i32), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn metric(path: &Path) -> Result<FiniteMetricSpace, CliError> {
    Ok(io::parse_metric(&read(path)?)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn params(p: &ParamArgs) -> Result<TwoDistanceParams, CliError> {
    Ok(TwoDistanceParams::new(p.a.clone(), p.b.clone())?)
}

fn positive(name: &str, v: usize) -> Result<usize, CliError> {
    if v == 0 {
        return Err(CliError::new(
            EXIT_INPUT,
            format!("{name} must be positive"),
        ));
    }
    Ok(v)
}

/// A decomposition document, or a metric document that is decomposed first.
fn decomposition_input(path: &Path, budget_cuts: usize) -> Result<CutDecomposition, CliError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| IoError::Json(e.to_string()))?;
    if value.get("dist").is_some() {
        let d = io::parse_pseudometric(&text)?;
        Ok(decompose_with_limit(&d, budget_cuts)?)
    } else {
        Ok(io::parse_decomposition(&text)?)
    }
}

fn execute(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Validate { metric, pseudo } => {
            let doc = io::parse_metric_doc(&read(metric)?)?;
            let n = doc.dist.len();
            let kind = match doc.validate(*pseudo)? {
                ValidatedSpace::Metric(_) => "metric",
                ValidatedSpace::Pseudometric(p) if p.to_metric().is_ok() => "metric",
                ValidatedSpace::Pseudometric(_) => "pseudometric",
            };
            Ok((
                json!({"valid": true, "kind": kind, "n": n}),
                format!("valid {kind} on {n} points"),
                EXIT_OK,
            ))
        }
        Command::Diam { metric: path } => {
            let x = metric(path)?;
            let d = x.diam();
            Ok((
                json!({"diam": to_value(&d)}),
                format!("diam = {d}"),
                EXIT_OK,
            ))
        }
        Command::Gh { x, y, budget_gh } => {
            let r = gh_distance_exact(
                &metric(x)?,
                &metric(y)?,
                positive("--budget-gh", *budget_gh)?,
            )?;
            let summary = format!(
                "d_GH = {} (witness with {} pairs)",
                r.distance,
                r.witness.len()
            );
            Ok((to_value(&r), summary, EXIT_OK))
        }
        Command::Borsuk {
            metric: path,
            m,
            lambda,
            budget_gh,
        } => {
            let x = metric(path)?;
            let lambdas = match lambda {
                Some(l) => vec![l.clone()],
                None => lambda_grid(&x.diam()),
            };
            let reports = lambdas
                .iter()
                .map(|l| verify_borsuk_theorem(&x, *m, l, *budget_gh))
                .collect::<Result<Vec<_>, _>>()?;
            let holds = reports.iter().all(|r| r.holds);
            let summary = format!("{} lambda values, criterion holds: {holds}", reports.len());
            let code = if holds { EXIT_OK } else { EXIT_INTERNAL };
            Ok((
                json!({"holds": holds, "reports": to_value(&reports)}),
                summary,
                code,
            ))
        }
        Command::CutDecompose {
            metric,
            budget_cuts,
        } => {
            let d = io::parse_pseudometric(&read(metric)?)?;
            match decompose_with_limit(&d, *budget_cuts) {
                Ok(dec) => {
                    let summary = format!("{} cuts", dec.len());
                    Ok((to_value(&dec), summary, EXIT_OK))
                }
                Err(CutError::NotInCutCone) => Ok((
                    json!({"in_cut_cone": false}),
                    "not in the cut cone".into(),
                    EXIT_NOT_IN_CUT_CONE,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Nesting { input, budget_cuts } => {
            let dec = decomposition_input(input, *budget_cuts)?;
            let h = build_nesting_hypergraph(&dec.cuts())?;
            let summary = format!(
                "{} cuts, {} pair edges, {} triple edges",
                h.cuts.len(),
                h.hypergraph.pair_count(),
                h.hypergraph.triple_count()
            );
            Ok((to_value(&h), summary, EXIT_OK))
        }
        Command::GraphFamily {
            input,
            budget_cuts,
            budget_family,
        } => {
            let dec = decomposition_input(input, *budget_cuts)?;
            let h = build_nesting_hypergraph(&dec.cuts())?;
            let family = enumerate_graph_family(&h.hypergraph, *budget_family)?;
            let summary = format!("{} graphs", family.len());
            Ok((to_value(&family), summary, EXIT_OK))
        }
        Command::Chromatic {
            graph,
            via,
            params: p,
            budget_gh,
        } => {
            let g = io::parse_graph(&read(graph)?)?;
            let p = params(p)?;
            let (value, chi) = match via {
                Via::Direct => {
                    let r = chromatic_number(&g, 64)?;
                    (to_value(&r), r.chi)
                }
                Via::Gh => {
                    let chi = chromatic_via_gh(&g, &p, *budget_gh)?;
                    (json!({"chi": chi}), chi)
                }
            };
            Ok((value, format!("chi = {chi}"), EXIT_OK))
        }
        Command::CliqueCover {
            graph,
            via,
            params: p,
            budget_gh,
        } => {
            let g = io::parse_graph(&read(graph)?)?;
            let p = params(p)?;
            let (value, theta) = match via {
                Via::Direct => {
                    let r = clique_cover_number(&g, 64)?;
                    (to_value(&r), r.theta)
                }
                Via::Gh => {
                    let theta = clique_cover_via_gh(&g, &p, *budget_gh)?;
                    (json!({"theta": theta}), theta)
                }
            };
            Ok((value, format!("theta = {theta}"), EXIT_OK))
        }
        Command::L1dim {
            metric: path,
            params: p,
            route,
            budgets,
        } => {
            let x = metric(path)?;
            let cfg = PipelineConfig {
                params: params(p)?,
                gh_size_limit: positive("--budget-gh", budgets.budget_gh)?,
                cut_point_limit: budgets.budget_cuts,
                family_budget: budgets.budget_family,
                parallel: budgets.parallel,
                ..PipelineConfig::default()
            };
            let report = match route {
                Route::Gh => l1_dimension_via_gh(&x, &cfg),
                Route::Coloring => coloring_report(&x, &cfg),
                Route::All => cross_validate(&x, &cfg),
            };
            match report {
                Ok(r) if r.dimension == Dimension::NotEmbeddable => Ok((
                    to_value(&r),
                    "not l1-embeddable".into(),
                    EXIT_NOT_IN_CUT_CONE,
                )),
                Ok(r) => {
                    let summary = format!("l1-dimension {}", to_value(&r.dimension));
                    Ok((to_value(&r), summary, EXIT_OK))
                }
                Err(L1Error::NotInCutCone) => Ok((
                    json!({"dimension": "not_embeddable", "in_cut_cone": false}),
                    "not l1-embeddable".into(),
                    EXIT_NOT_IN_CUT_CONE,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Selftest {
            params: p,
            parallel,
        } => {
            let report = selftest::run(params(p)?, *parallel);
            let summary = format!(
                "selftest: {} cases, {} failures",
                report.cases, report.failures
            );
            let code = if report.failures == 0 {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            };
            Ok((to_value(&report), summary, code))
        }
        Command::Gen {
            kind,
            n,
            cuts,
            separating,
            m,
            lambda,
            p,
            max,
            graph,
            params: pa,
            seed,
        } => {
            let mut rng = gen::rng(*seed);
            let value = match kind {
                GenKind::RandomMetric => to_value(&MetricDoc::from_space(
                    gen::random_metric(*n, max, &mut rng)?.as_pseudometric(),
                )),
                GenKind::RandomGraph => to_value(&gen::random_graph(*n, *p, &mut rng)?),
                GenKind::TwoDistance => {
                    let g = match graph {
                        Some(path) => io::parse_graph(&read(path)?)?,
                        None => gen::random_graph(*n, *p, &mut rng)?,
                    };
                    to_value(&gen::two_distance_doc(&g, &params(pa)?))
                }
                GenKind::Simplex => to_value(&gen::simplex_doc(*m, lambda)?),
                GenKind::CutSum => to_value(&MetricDoc::from_space(&gen::cut_sum(
                    *n,
                    *cuts,
                    *separating,
                    &mut rng,
                )?)),
            };
            Ok((
                value,
                format!("generated {kind:?} with seed {seed}"),
                EXIT_OK,
            ))
        }
    }
}

/// Runs one command. JSON goes to `stdout`, a one-line summary to `stderr`.
pub fn run(cli: &Cli) -> Outcome {
    match execute(&cli.command) {
        Ok((value, summary, code)) => Outcome {
            stdout: serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n",
            stderr: summary + "\n",
            code,
        },
        Err(e) => Outcome {
            stdout: serde_json::to_string_pretty(&json!({"error": e.message, "exit_code": e.code}))
                .expect("JSON values serialize")
                + "\n",
            stderr: format!("error: {}\n", e.message),
            code: e.code,
        },
    }
}

/// Parses `args` (including the program name) and runs the command. Argument
/// errors exit with code 1.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code,
                }
            }
        }
    }
}
