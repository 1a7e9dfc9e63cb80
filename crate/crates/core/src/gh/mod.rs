//! Gromov–Hausdorff distance between small finite metric spaces.
//!
//! `2 d_GH(X, Y)` is the minimum distortion over all correspondences between
//! `X` and `Y`. [`gh_distance_exact`] computes it exactly by combinatorial
//! search, so everything here is limited to a few points per
//! side. The closed form for simplexes larger than the other space and the
//! diameter bounds are provided separately so they can be checked against the
//! search.

mod borsuk;
mod pairset;
mod search;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

pub use borsuk::{
    borsuk_partition, borsuk_partition_exists, lambda_grid, verify_borsuk_theorem, BorsukReport,
};

/// Default maximum number of points per side accepted by the exact search.
pub const DEFAULT_GH_SIZE_LIMIT: usize = 8;
/// Hard cap on `#X * #Y` imposed by the search's bitset width.
pub const MAX_CORRESPONDENCE_PAIRS: usize = pairset::CAPACITY;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GhError {
    #[error("spaces of size {nx} x {ny} exceed the exact-search limit of {limit} points per side")]
    SizeLimitExceeded { nx: usize, ny: usize, limit: usize },
    #[error("not a correspondence: {0}")]
    NotACorrespondence(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("partition size {m} must satisfy 2 <= m <= {n}")]
    BadCardinality { m: usize, n: usize },
}

/// A relation between point sets `0..nx` and `0..ny` in which every point of
/// either side is related to something.
/// Serialized as its sorted pair list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "Vec<(usize, usize)>")]
pub struct Correspondence {
    nx: usize,
    ny: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl From<Correspondence> for Vec<(usize, usize)> {
    fn from(r: Correspondence) -> Self {
        r.pairs.into_iter().collect()
    }
}

impl Correspondence {
    pub fn new(
        nx: usize,
        ny: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GhError> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= nx || j >= ny) {
            return Err(GhError::NotACorrespondence(format!(
                "pair ({i},{j}) out of range for {nx} x {ny}"
            )));
        }
        if let Some(i) = (0..nx).find(|&i| !pairs.iter().any(|&(a, _)| a == i)) {
            return Err(GhError::NotACorrespondence(format!(
                "point {i} of X has empty image"
            )));
        }
        if let Some(j) = (0..ny).find(|&j| !pairs.iter().any(|&(_, b)| b == j)) {
            return Err(GhError::NotACorrespondence(format!(
                "point {j} of Y has empty preimage"
            )));
        }
        Ok(Correspondence { nx, ny, pairs })
    }

    /// The bijection `i -> i` on `0..n`.
    pub fn identity(n: usize) -> Self {
        Correspondence {
            nx: n,
            ny: n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Swaps the roles of the two sides.
    pub fn transpose(&self) -> Correspondence {
        Correspondence {
            nx: self.ny,
            ny: self.nx,
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Irreducible means no pair can be dropped without losing coverage.
    pub fn is_irreducible(&self) -> bool {
        self.pairs.iter().all(|&(i, j)| {
            let x_deg = self.pairs.iter().filter(|p| p.0 == i).count();
            let y_deg = self.pairs.iter().filter(|p| p.1 == j).count();
            x_deg == 1 || y_deg == 1
        })
    }
}

/// Distortion `max |d_X(x,x') - d_Y(y,y')|` over pairs of related pairs.
pub fn distortion(
    r: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<Rational, GhError> {
    if r.nx != x.len() || r.ny != y.len() {
        return Err(GhError::NotACorrespondence(format!(
            "built for {} x {}, spaces are {} x {}",
            r.nx,
            r.ny,
            x.len(),
            y.len()
        )));
    }
    let mut worst = Rational::zero();
    for &(a, b) in &r.pairs {
        for &(c, d) in &r.pairs {
            let v = (x.dist(a, c) - y.dist(b, d)).abs();
            if v > worst {
                worst = v;
            }
        }
    }
    Ok(worst)
}

/// Exact Gromov–Hausdorff distance with an optimal correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhResult {
    pub distance: Rational,
    pub witness: Correspondence,
}

fn check_size(x: &FiniteMetricSpace, y: &FiniteMetricSpace, limit: usize) -> Result<(), GhError> {
    let (nx, ny) = (x.len(), y.len());
    let limit = limit.min(64);
    if nx > limit || ny > limit || nx * ny > MAX_CORRESPONDENCE_PAIRS {
        return Err(GhError::SizeLimitExceeded { nx, ny, limit });
    }
    Ok(())
}

/// Exact `d_GH(X, Y)` with the lexicographically least optimal correspondence.
pub fn gh_distance_exact(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    size_limit: usize,
) -> Result<GhResult, GhError> {
    check_size(x, y, size_limit)?;
    let (twice, pairs) = search::CorrespondenceSearch::new(x, y).solve();
    Ok(GhResult {
        distance: twice / Rational::from_integer(2),
        witness: Correspondence::new(x.len(), y.len(), pairs)
            .expect("search yields a correspondence"),
    })
}

/// Exact `2 d_GH(X, Y)` without constructing a witness. This is the hot path
/// of the coloring and dimension scans.
pub fn twice_gh_distance(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    size_limit: usize,
) -> Result<Rational, GhError> {
    check_size(x, y, size_limit)?;
    Ok(search::CorrespondenceSearch::new(x, y).min_distortion())
}

/// `d_GH(lambda * Delta_m, X)` for `m > #X`: half of `max(lambda, diam X - lambda)`.
pub fn gh_simplex_closed_form(
    lambda: &Rational,
    m: usize,
    x: &FiniteMetricSpace,
) -> Result<Rational, GhError> {
    if m <= x.len() {
        return Err(GhError::PreconditionViolated(format!(
            "closed form needs m > #X (m = {m}, #X = {})",
            x.len()
        )));
    }
    if lambda.is_negative() {
        return Err(GhError::PreconditionViolated(
            "lambda must be nonnegative".into(),
        ));
    }
    let twice = lambda.clone().max(x.diam() - lambda);
    Ok(twice / Rational::from_integer(2))
}

/// `(|diam X - diam Y| / 2, max(diam X, diam Y) / 2)`, which bracket `d_GH(X, Y)`.
pub fn gh_bounds(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (Rational, Rational) {
    let two = Rational::from_integer(2);
    let (dx, dy) = (x.diam(), y.diam());
    ((&dx - &dy).abs() / two.clone(), dx.max(dy) / two)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::simplex;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn path3() -> FiniteMetricSpace {
        FiniteMetricSpace::from_integers([[0, 1, 2], [1, 0, 1], [2, 1, 0]]).unwrap()
    }

    /// Brute-force oracle: minimum distortion over every nonempty relation,
    /// filtered to correspondences. Only usable for `#X * #Y <= 16`.
    fn brute_force_twice_gh(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
        let (nx, ny) = (x.len(), y.len());
        let np = nx * ny;
        let mut best: Option<Rational> = None;
        for mask in 1u32..(1 << np) {
            let pairs = (0..np)
                .filter(|p| mask >> p & 1 == 1)
                .map(|p| (p / ny, p % ny));
            if let Ok(r) = Correspondence::new(nx, ny, pairs) {
                let d = distortion(&r, x, y).unwrap();
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn distortion_examples() {
        let x = path3();
        assert_eq!(
            distortion(&Correspondence::identity(3), &x, &x).unwrap(),
            Rational::zero()
        );
        let d2 = simplex(2, &Rational::one()).unwrap();
        let d1 = simplex(1, &Rational::one()).unwrap();
        let only = Correspondence::new(2, 1, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(distortion(&only, &d2, &d1).unwrap(), Rational::one());
        let d2_3 = simplex(2, &Rational::from_integer(3)).unwrap();
        assert_eq!(
            distortion(&Correspondence::identity(2), &d2, &d2_3).unwrap(),
            Rational::from_integer(2)
        );
    }

    #[test]
    fn rejects_non_correspondences() {
        assert!(Correspondence::new(2, 2, [(0, 0)]).is_err());
        assert!(Correspondence::new(2, 2, [(0, 0), (1, 2)]).is_err());
        let x = path3();
        let r = Correspondence::identity(2);
        assert!(matches!(
            distortion(&r, &x, &x),
            Err(GhError::NotACorrespondence(_))
        ));
    }

    #[test]
    fn gh_examples() {
        let x = path3();
        let r = gh_distance_exact(&x, &x, DEFAULT_GH_SIZE_LIMIT).unwrap();
        assert_eq!(r.distance, Rational::zero());
        assert_eq!(r.witness, Correspondence::identity(3));

        let d1 = simplex(1, &Rational::one()).unwrap();
        assert_eq!(
            gh_distance_exact(&d1, &x, 8).unwrap().distance,
            Rational::one()
        );

        let d3 = simplex(3, &Rational::one()).unwrap();
        let d2 = simplex(2, &Rational::one()).unwrap();
        let r = gh_distance_exact(&d3, &d2, 8).unwrap();
        assert_eq!(r.distance, q(1, 2));
        assert_eq!(distortion(&r.witness, &d3, &d2).unwrap(), Rational::one());
        assert_eq!(brute_force_twice_gh(&d3, &d2), Rational::one());
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let d3 = simplex(3, &Rational::one()).unwrap();
        let d2 = simplex(2, &Rational::one()).unwrap();
        let r = gh_distance_exact(&d3, &d2, 8).unwrap();
        // At distortion 1 every pair is compatible with every other, so the
        // least sorted pair list keeps taking the next pair until x2 is hit.
        assert_eq!(
            r.witness.pairs().collect::<Vec<_>>(),
            vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]
        );
    }

    #[test]
    fn size_limit_refuses() {
        let big = simplex(9, &Rational::one()).unwrap();
        let small = simplex(2, &Rational::one()).unwrap();
        assert_eq!(
            gh_distance_exact(&big, &small, DEFAULT_GH_SIZE_LIMIT),
            Err(GhError::SizeLimitExceeded {
                nx: 9,
                ny: 2,
                limit: 8
            })
        );
        assert!(twice_gh_distance(&big, &small, 9).is_ok());
    }

    #[test]
    fn closed_form_examples() {
        let d3 = simplex(3, &Rational::one()).unwrap();
        assert_eq!(
            gh_simplex_closed_form(&Rational::one(), 4, &d3).unwrap(),
            q(1, 2)
        );
        let x = path3();
        assert_eq!(
            gh_simplex_closed_form(&Rational::zero(), 7, &x).unwrap(),
            Rational::one()
        );
        let d1 = simplex(1, &Rational::one()).unwrap();
        assert_eq!(
            gh_simplex_closed_form(&Rational::from_integer(5), 2, &d1).unwrap(),
            q(5, 2)
        );
        assert!(matches!(
            gh_simplex_closed_form(&Rational::one(), 3, &x),
            Err(GhError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn bounds_examples() {
        let x = path3();
        assert_eq!(gh_bounds(&x, &x), (Rational::zero(), Rational::one()));
        let d1 = simplex(1, &Rational::one()).unwrap();
        assert_eq!(gh_bounds(&d1, &x), (Rational::one(), Rational::one()));
        let a = simplex(2, &Rational::one()).unwrap();
        let b = simplex(2, &Rational::from_integer(4)).unwrap();
        assert_eq!(gh_bounds(&a, &b), (q(3, 2), Rational::from_integer(2)));
    }

    #[test]
    fn search_matches_brute_force_on_small_spaces() {
        let spaces = [
            path3(),
            simplex(2, &Rational::one()).unwrap(),
            simplex(3, &q(3, 2)).unwrap(),
            FiniteMetricSpace::from_integers([[0, 2, 3], [2, 0, 4], [3, 4, 0]]).unwrap(),
            FiniteMetricSpace::from_integers([
                [0, 1, 1, 2],
                [1, 0, 2, 1],
                [1, 2, 0, 1],
                [2, 1, 1, 0],
            ])
            .unwrap(),
        ];
        for x in &spaces {
            for y in &spaces {
                if x.len() * y.len() > 16 {
                    continue;
                }
                let expected = brute_force_twice_gh(x, y);
                let got = gh_distance_exact(x, y, 8).unwrap();
                assert_eq!(got.distance, expected.clone() / Rational::from_integer(2));
                assert_eq!(distortion(&got.witness, x, y).unwrap(), expected);
                assert_eq!(twice_gh_distance(x, y, 8).unwrap(), expected);
            }
        }
    }
}
