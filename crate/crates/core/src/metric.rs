//! Finite metric and pseudometric spaces over exact rationals.

use std::fmt;

use serde::Serialize;

use crate::graph::SimpleGraph;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("distance matrix is empty")]
    Empty,
    #[error("distance matrix is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("d({0},{0}) is nonzero")]
    NonzeroDiagonal(usize),
    #[error("d({0},{1}) is negative")]
    NegativeDistance(usize, usize),
    #[error("d({0},{1}) != d({1},{0})")]
    Asymmetric(usize, usize),
    #[error("d({0},{1}) is zero for distinct points")]
    ZeroOffDiagonal(usize, usize),
    #[error("triangle inequality fails: d({0},{1}) > d({0},{2}) + d({2},{1})")]
    TriangleViolation(usize, usize, usize),
    #[error("simplex scale must be nonnegative")]
    NegativeLambda,
    #[error("simplex needs at least one point")]
    EmptySimplex,
    #[error("two-distance parameters must satisfy 0 < a < b <= 2a (got a={a}, b={b})")]
    InvalidTwoDistanceParams { a: Rational, b: Rational },
    #[error("subset is empty")]
    EmptySubset,
    #[error("point {point} out of range for a space with {n} points")]
    PointOutOfRange { point: usize, n: usize },
}

/// A validated finite pseudometric: zero diagonal, symmetric, nonnegative,
/// triangle inequality. Distinct points may be at distance zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePseudometricSpace {
    n: usize,
    dist: Vec<Rational>,
}

/// A validated finite metric space: a pseudometric with strictly positive
/// off-diagonal distances.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMetricSpace {
    inner: FinitePseudometricSpace,
}

/// Result of [`validate_metric`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidatedSpace {
    Metric(FiniteMetricSpace),
    Pseudometric(FinitePseudometricSpace),
}

/// Checks the axioms in a fixed order and reports the first violation:
/// shape, then per-entry axioms in row-major order, then the triangle
/// inequality over `(i, j, k)` in lexicographic order.
pub fn validate_metric(
    matrix: Vec<Vec<Rational>>,
    allow_pseudo: bool,
) -> Result<ValidatedSpace, MetricError> {
    let space = FinitePseudometricSpace::from_rows(matrix, !allow_pseudo)?;
    Ok(if allow_pseudo {
        ValidatedSpace::Pseudometric(space)
    } else {
        ValidatedSpace::Metric(FiniteMetricSpace { inner: space })
    })
}

impl FinitePseudometricSpace {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        Self::from_rows(matrix, false)
    }

    fn from_rows(matrix: Vec<Vec<Rational>>, strict: bool) -> Result<Self, MetricError> {
        let n = matrix.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = &matrix[i][j];
                if i == j {
                    if !v.is_zero() {
                        return Err(MetricError::NonzeroDiagonal(i));
                    }
                    continue;
                }
                if v.is_negative() {
                    return Err(MetricError::NegativeDistance(i, j));
                }
                if *v != matrix[j][i] {
                    return Err(MetricError::Asymmetric(i, j));
                }
                if strict && v.is_zero() {
                    return Err(MetricError::ZeroOffDiagonal(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if matrix[i][j] > &matrix[i][k] + &matrix[k][j] {
                        return Err(MetricError::TriangleViolation(i, j, k));
                    }
                }
            }
        }
        Ok(FinitePseudometricSpace {
            n,
            dist: matrix.into_iter().flatten().collect(),
        })
    }

    /// Builds from a symmetric closure `f(i, j)` for `i < j`, skipping
    /// validation. Callers guarantee the axioms.
    pub(crate) fn from_fn_unchecked(n: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut dist = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                dist[j * n + i] = v.clone();
                dist[i * n + j] = v;
            }
        }
        FinitePseudometricSpace { n, dist }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Largest distance; zero for a single point.
    pub fn diam(&self) -> Rational {
        self.dist
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Promotes to a metric if all off-diagonal distances are positive.
    pub fn to_metric(&self) -> Result<FiniteMetricSpace, MetricError> {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.dist(i, j).is_zero() {
                    return Err(MetricError::ZeroOffDiagonal(i, j));
                }
            }
        }
        Ok(FiniteMetricSpace {
            inner: self.clone(),
        })
    }
}

impl FiniteMetricSpace {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        Ok(FiniteMetricSpace {
            inner: FinitePseudometricSpace::from_rows(matrix, true)?,
        })
    }

    /// Integer-valued convenience constructor, mostly for tests.
    pub fn from_integers<const N: usize>(rows: [[i64; N]; N]) -> Result<Self, MetricError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        self.inner.n == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        self.inner.dist(i, j)
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.inner.rows()
    }

    pub fn diam(&self) -> Rational {
        self.inner.diam()
    }

    pub fn as_pseudometric(&self) -> &FinitePseudometricSpace {
        &self.inner
    }

    pub(crate) fn from_fn_unchecked(n: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        FiniteMetricSpace {
            inner: FinitePseudometricSpace::from_fn_unchecked(n, f),
        }
    }
}

impl From<FiniteMetricSpace> for FinitePseudometricSpace {
    fn from(m: FiniteMetricSpace) -> Self {
        m.inner
    }
}

impl fmt::Debug for FinitePseudometricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.dist.chunks(self.n)).finish()
    }
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.inner, f)
    }
}

/// Diameter of a metric space (zero for a single point).
pub fn diam(space: &FiniteMetricSpace) -> Rational {
    space.diam()
}

/// The simplex `lambda * Delta_m`: `m` points at mutual distance `lambda`.
/// A zero scale collapses to the one-point space.
pub fn simplex(m: usize, lambda: &Rational) -> Result<FiniteMetricSpace, MetricError> {
    if lambda.is_negative() {
        return Err(MetricError::NegativeLambda);
    }
    if m == 0 {
        return Err(MetricError::EmptySimplex);
    }
    let m = if lambda.is_zero() { 1 } else { m };
    Ok(FiniteMetricSpace::from_fn_unchecked(m, |_, _| {
        lambda.clone()
    }))
}

/// Distances of a two-distance space: `0 < a < b <= 2a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoDistanceParams {
    a: Rational,
    b: Rational,
}

impl TwoDistanceParams {
    pub fn new(a: Rational, b: Rational) -> Result<Self, MetricError> {
        let twice_a = &a + &a;
        if !a.is_positive() || a >= b || b > twice_a {
            return Err(MetricError::InvalidTwoDistanceParams { a, b });
        }
        Ok(TwoDistanceParams { a, b })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }
}

impl Default for TwoDistanceParams {
    fn default() -> Self {
        TwoDistanceParams {
            a: Rational::one(),
            b: Rational::from_integer(2),
        }
    }
}

/// Which of the two distances adjacent vertices receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacentGets {
    A,
    B,
}

/// Two-distance space on the vertices of `graph`: adjacent vertices get the
/// distance selected by `adjacent_gets`, other distinct vertices the other one.
/// Always a metric because `b <= 2a`.
pub fn two_distance_from_graph(
    graph: &SimpleGraph,
    params: &TwoDistanceParams,
    adjacent_gets: AdjacentGets,
) -> FiniteMetricSpace {
    let (adjacent, other) = match adjacent_gets {
        AdjacentGets::A => (params.a(), params.b()),
        AdjacentGets::B => (params.b(), params.a()),
    };
    FiniteMetricSpace::from_fn_unchecked(graph.vertex_count(), |i, j| {
        if graph.has_edge(i, j) {
            adjacent.clone()
        } else {
            other.clone()
        }
    })
}

/// Hausdorff distance between two nonempty point subsets of `space`.
pub fn hausdorff_distance(
    space: &FiniteMetricSpace,
    a: &[usize],
    b: &[usize],
) -> Result<Rational, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptySubset);
    }
    let n = space.len();
    if let Some(&point) = a.iter().chain(b).find(|&&p| p >= n) {
        return Err(MetricError::PointOutOfRange { point, n });
    }
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&p| to.iter().map(|&q| space.dist(p, q)).min().unwrap())
            .max()
            .unwrap()
            .clone()
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect()
    }

    fn path3() -> FiniteMetricSpace {
        FiniteMetricSpace::from_integers([[0, 1, 2], [1, 0, 1], [2, 1, 0]]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(matches!(
            validate_metric(ints(&[&[0, 1], &[1, 0]]), false),
            Ok(ValidatedSpace::Metric(_))
        ));
        assert_eq!(
            validate_metric(ints(&[&[0, 1], &[2, 0]]), false),
            Err(MetricError::Asymmetric(0, 1))
        );
        assert_eq!(
            validate_metric(ints(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]), false),
            Err(MetricError::TriangleViolation(0, 2, 1))
        );
    }

    #[test]
    fn validate_other_axioms() {
        assert_eq!(
            validate_metric(ints(&[&[1, 1], &[1, 0]]), false),
            Err(MetricError::NonzeroDiagonal(0))
        );
        assert_eq!(
            validate_metric(ints(&[&[0, -1], &[-1, 0]]), false),
            Err(MetricError::NegativeDistance(0, 1))
        );
        assert_eq!(
            validate_metric(ints(&[&[0, 0], &[0, 0]]), false),
            Err(MetricError::ZeroOffDiagonal(0, 1))
        );
        assert!(matches!(
            validate_metric(ints(&[&[0, 0], &[0, 0]]), true),
            Ok(ValidatedSpace::Pseudometric(_))
        ));
        assert!(matches!(
            validate_metric(ints(&[&[0, 1], &[1]]), false),
            Err(MetricError::NotSquare { row: 1, .. })
        ));
        assert_eq!(validate_metric(vec![], false), Err(MetricError::Empty));
    }

    #[test]
    fn diam_examples() {
        assert_eq!(
            diam(&simplex(1, &Rational::one()).unwrap()),
            Rational::zero()
        );
        assert_eq!(diam(&simplex(3, &q(5, 2)).unwrap()), q(5, 2));
        assert_eq!(diam(&path3()), Rational::from_integer(2));
    }

    #[test]
    fn simplex_examples() {
        assert_eq!(simplex(1, &Rational::one()).unwrap().len(), 1);
        let s = simplex(3, &Rational::one()).unwrap();
        assert_eq!(s.len(), 3);
        assert!((0..3).all(|i| (0..3).all(|j| i == j || *s.dist(i, j) == Rational::one())));
        assert_eq!(simplex(4, &Rational::zero()).unwrap().len(), 1);
        assert_eq!(simplex(2, &q(-1, 2)), Err(MetricError::NegativeLambda));
    }

    #[test]
    fn two_distance_examples() {
        let p = TwoDistanceParams::default();
        let edge = SimpleGraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(
            two_distance_from_graph(&edge, &p, AdjacentGets::B).rows(),
            ints(&[&[0, 2], &[2, 0]])
        );
        let empty = SimpleGraph::empty(3);
        assert_eq!(
            two_distance_from_graph(&empty, &p, AdjacentGets::B),
            simplex(3, &Rational::one()).unwrap()
        );
        let path = SimpleGraph::path(3);
        assert_eq!(
            two_distance_from_graph(&path, &p, AdjacentGets::B).rows(),
            ints(&[&[0, 2, 1], &[2, 0, 2], &[1, 2, 0]])
        );
    }

    #[test]
    fn two_distance_params_invariant() {
        assert!(TwoDistanceParams::new(q(1, 1), q(2, 1)).is_ok());
        assert!(TwoDistanceParams::new(q(2, 1), q(3, 1)).is_ok());
        assert!(TwoDistanceParams::new(q(1, 1), q(1, 1)).is_err());
        assert!(TwoDistanceParams::new(q(1, 1), q(5, 2)).is_err());
        assert!(TwoDistanceParams::new(q(0, 1), q(0, 1)).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let x = path3();
        assert_eq!(
            hausdorff_distance(&x, &[0, 2], &[2, 0]).unwrap(),
            Rational::zero()
        );
        assert_eq!(
            hausdorff_distance(&x, &[0], &[0, 1, 2]).unwrap(),
            Rational::from_integer(2)
        );
        assert_eq!(
            hausdorff_distance(&x, &[0], &[2]).unwrap(),
            Rational::from_integer(2)
        );
        assert_eq!(
            hausdorff_distance(&x, &[], &[2]),
            Err(MetricError::EmptySubset)
        );
        assert_eq!(
            hausdorff_distance(&x, &[3], &[2]),
            Err(MetricError::PointOutOfRange { point: 3, n: 3 })
        );
    }
}
