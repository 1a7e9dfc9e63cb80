//! Partitions into parts of strictly smaller diameter, and their
//! characterization through `2 d_GH(lambda * Delta_m, X)`.

use serde::Serialize;

use super::{twice_gh_distance, GhError};
use crate::metric::{simplex, FiniteMetricSpace};
use crate::rational::Rational;

/// Splits `X` into exactly `m` nonempty parts, each of diameter `< diam X`,
/// if possible. For a finite space this is the same as asking for a proper
/// `m`-coloring of the graph of diametral pairs that uses every color.
///
/// Parts are listed in order of their smallest point; the first partition
/// found by the search (points in index order, existing parts before new
/// ones) is returned.
pub fn borsuk_partition(
    x: &FiniteMetricSpace,
    m: usize,
) -> Result<Option<Vec<Vec<usize>>>, GhError> {
    let n = x.len();
    if m < 2 || m > n {
        return Err(GhError::BadCardinality { m, n });
    }
    let diam = x.diam();
    let mut conflict = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && *x.dist(i, j) == diam {
                conflict[i] |= 1 << j;
            }
        }
    }
    let mut parts: Vec<u64> = Vec::with_capacity(m);
    if place(0, n, m, &conflict, &mut parts) {
        Ok(Some(
            parts
                .iter()
                .map(|&mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

fn place(point: usize, n: usize, m: usize, conflict: &[u64], parts: &mut Vec<u64>) -> bool {
    if n - point < m - parts.len() {
        return false;
    }
    if point == n {
        return true;
    }
    for k in 0..parts.len() {
        if parts[k] & conflict[point] == 0 {
            parts[k] |= 1 << point;
            if place(point + 1, n, m, conflict, parts) {
                return true;
            }
            parts[k] &= !(1 << point);
        }
    }
    if parts.len() < m {
        parts.push(1 << point);
        if place(point + 1, n, m, conflict, parts) {
            return true;
        }
        parts.pop();
    }
    false
}

pub fn borsuk_partition_exists(x: &FiniteMetricSpace, m: usize) -> Result<bool, GhError> {
    Ok(borsuk_partition(x, m)?.is_some())
}

/// The scale grid `diam * k / 8` for `k = 1..=7`.
pub fn lambda_grid(diam: &Rational) -> Vec<Rational> {
    (1..=7).map(|k| diam * &Rational::new(k, 8)).collect()
}

/// Both sides of the partition/distance equivalence for one `(X, m, lambda)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BorsukReport {
    pub m: usize,
    pub lambda: Rational,
    pub diam: Rational,
    pub partition_exists: bool,
    pub partition: Option<Vec<Vec<usize>>>,
    pub twice_gh: Rational,
    /// Partition exists iff `twice_gh < diam`, and `twice_gh == diam` otherwise.
    pub holds: bool,
}

pub fn verify_borsuk_theorem(
    x: &FiniteMetricSpace,
    m: usize,
    lambda: &Rational,
    size_limit: usize,
) -> Result<BorsukReport, GhError> {
    let diam = x.diam();
    if !lambda.is_positive() || *lambda >= diam {
        return Err(GhError::PreconditionViolated(format!(
            "need 0 < lambda < diam X (lambda = {lambda}, diam = {diam})"
        )));
    }
    let partition = borsuk_partition(x, m)?;
    let sim = simplex(m, lambda).expect("lambda is positive");
    let twice_gh = twice_gh_distance(&sim, x, size_limit)?;
    let partition_exists = partition.is_some();
    let holds = if partition_exists {
        twice_gh < diam
    } else {
        twice_gh == diam
    };
    Ok(BorsukReport {
        m,
        lambda: lambda.clone(),
        diam,
        partition_exists,
        partition,
        twice_gh,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;
    use crate::metric::{two_distance_from_graph, AdjacentGets, TwoDistanceParams};

    fn max_part_diam(x: &FiniteMetricSpace, parts: &[Vec<usize>]) -> Rational {
        parts
            .iter()
            .flat_map(|p| {
                p.iter()
                    .flat_map(move |&i| p.iter().map(move |&j| x.dist(i, j).clone()))
            })
            .max()
            .unwrap()
    }

    #[test]
    fn simplex_cases() {
        let x = simplex(4, &Rational::one()).unwrap();
        for m in 2..4 {
            assert_eq!(borsuk_partition_exists(&x, m), Ok(false));
        }
        assert_eq!(
            borsuk_partition(&x, 4).unwrap(),
            Some(vec![vec![0], vec![1], vec![2], vec![3]])
        );
    }

    #[test]
    fn path_two_distance_space() {
        let x = two_distance_from_graph(
            &SimpleGraph::path(3),
            &TwoDistanceParams::default(),
            AdjacentGets::B,
        );
        let parts = borsuk_partition(&x, 2).unwrap().unwrap();
        assert_eq!(parts, vec![vec![0, 2], vec![1]]);
        assert!(max_part_diam(&x, &parts) < x.diam());
    }

    #[test]
    fn bad_cardinality() {
        let x = simplex(3, &Rational::one()).unwrap();
        assert_eq!(
            borsuk_partition(&x, 1),
            Err(GhError::BadCardinality { m: 1, n: 3 })
        );
        assert_eq!(
            borsuk_partition(&x, 4),
            Err(GhError::BadCardinality { m: 4, n: 3 })
        );
    }

    #[test]
    fn theorem_examples() {
        let d3 = simplex(3, &Rational::one()).unwrap();
        let r = verify_borsuk_theorem(&d3, 2, &Rational::new(1, 2), 8).unwrap();
        assert!(!r.partition_exists && r.holds);
        assert_eq!(r.twice_gh, Rational::one());

        let path = FiniteMetricSpace::from_integers([[0, 1, 2], [1, 0, 1], [2, 1, 0]]).unwrap();
        let r = verify_borsuk_theorem(&path, 2, &Rational::one(), 8).unwrap();
        assert!(r.partition_exists && r.holds);
        assert!(r.twice_gh < Rational::from_integer(2));

        let d2 = simplex(2, &Rational::one()).unwrap();
        let r = verify_borsuk_theorem(&d2, 2, &Rational::new(1, 2), 8).unwrap();
        assert!(r.partition_exists && r.holds);
        assert!(r.twice_gh < Rational::one());

        assert!(matches!(
            verify_borsuk_theorem(&d2, 2, &Rational::one(), 8),
            Err(GhError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn grid() {
        let g = lambda_grid(&Rational::from_integer(2));
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], Rational::new(1, 4));
        assert_eq!(g[6], Rational::new(7, 4));
    }
}
