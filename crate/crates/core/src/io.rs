//! JSON documents.
//!
//! * metric: `{"labels": ["a", "b"], "dist": [[0, 1], [1, 0]]}`, labels
//!   optional, entries integers or `"p/q"` strings;
//! * graph: `{"n": 4, "edges": [[0, 1], [2, 3]]}`;
//! * decomposition: `{"n": 3, "cuts": [{"side": [0], "weight": "1/2"}]}`.

use serde::{Deserialize, Serialize};

use crate::cut::{CutDecomposition, CutError};
use crate::graph::{GraphError, SimpleGraph};
use crate::metric::{
    validate_metric, FiniteMetricSpace, FinitePseudometricSpace, MetricError, ValidatedSpace,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error("{labels} labels for {n} points")]
    LabelCount { labels: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub dist: Vec<Vec<Rational>>,
}

impl MetricDoc {
    pub fn from_space(space: &FinitePseudometricSpace) -> Self {
        MetricDoc {
            labels: None,
            dist: space.rows(),
        }
    }

    /// Validates the matrix; with `allow_pseudo` zero off-diagonal entries
    /// are accepted.
    pub fn validate(self, allow_pseudo: bool) -> Result<ValidatedSpace, IoError> {
        let n = self.dist.len();
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(IoError::LabelCount {
                    labels: labels.len(),
                    n,
                });
            }
        }
        Ok(validate_metric(self.dist, allow_pseudo)?)
    }
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

pub fn parse_metric_doc(text: &str) -> Result<MetricDoc, IoError> {
    from_json(text)
}

pub fn parse_metric(text: &str) -> Result<FiniteMetricSpace, IoError> {
    match parse_metric_doc(text)?.validate(false)? {
        ValidatedSpace::Metric(m) => Ok(m),
        ValidatedSpace::Pseudometric(p) => Ok(p.to_metric()?),
    }
}

pub fn parse_pseudometric(text: &str) -> Result<FinitePseudometricSpace, IoError> {
    match parse_metric_doc(text)?.validate(true)? {
        ValidatedSpace::Metric(m) => Ok(m.into()),
        ValidatedSpace::Pseudometric(p) => Ok(p),
    }
}

pub fn parse_graph(text: &str) -> Result<SimpleGraph, IoError> {
    from_json(text)
}

pub fn parse_decomposition(text: &str) -> Result<CutDecomposition, IoError> {
    from_json(text)
}
