//! Cuts, cut pseudometrics and cut decompositions.
//!
//! A finite pseudometric is a nonnegative combination of cut pseudometrics
//! exactly when it embeds isometrically into some rectilinear space.
//! [`decompose`] decides this with an exact linear feasibility problem over
//! all cuts of the point set.

mod lp;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::metric::FinitePseudometricSpace;
use crate::rational::Rational;

/// Default bound on the number of points accepted by [`all_cuts`] and
/// [`decompose`] (`2^13 - 1` cuts).
pub const DEFAULT_MAX_CUT_POINTS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CutError {
    #[error("a cut side must be a proper nonempty subset of 0..{n}")]
    ImproperSide { n: usize },
    #[error("point {point} out of range for {n} points")]
    PointOutOfRange { point: usize, n: usize },
    #[error("{n} points exceed the cut enumeration limit of {limit}")]
    TooManyPoints { n: usize, limit: usize },
    #[error("cuts live on different point sets ({0} vs {1} points)")]
    AmbientMismatch(usize, usize),
    #[error("cut {0} appears twice")]
    DuplicateCut(Cut),
    #[error("cut weight {0} is not positive")]
    NonPositiveWeight(Rational),
    #[error("the pseudometric is not in the cut cone (not l1-embeddable)")]
    NotInCutCone,
}

/// A bipartition `{S, S'}` of `0..n`, stored by the side containing point 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    n: usize,
    side: u64,
}

impl Cut {
    /// Builds a cut from either of its sides given as a bitmask.
    pub fn from_mask(n: usize, mask: u64) -> Result<Cut, CutError> {
        if n > 63 {
            return Err(CutError::TooManyPoints { n, limit: 63 });
        }
        let full = (1u64 << n) - 1;
        if mask & !full != 0 {
            let point = (0..64).rev().find(|&i| mask >> i & 1 == 1).unwrap();
            return Err(CutError::PointOutOfRange { point, n });
        }
        if mask == 0 || mask == full {
            return Err(CutError::ImproperSide { n });
        }
        let side = if mask & 1 == 1 { mask } else { full & !mask };
        Ok(Cut { n, side })
    }

    /// Builds a cut from either of its sides given as a point list.
    pub fn from_side(n: usize, points: &[usize]) -> Result<Cut, CutError> {
        let mut mask = 0u64;
        for &p in points {
            if p >= n || p >= 64 {
                return Err(CutError::PointOutOfRange { point: p, n });
            }
            mask |= 1 << p;
        }
        Cut::from_mask(n, mask)
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    /// Bitmask of the canonical side (contains point 0).
    pub fn side_mask(&self) -> u64 {
        self.side
    }

    /// Bitmask of the side not containing point 0.
    pub fn other_mask(&self) -> u64 {
        ((1u64 << self.n) - 1) & !self.side
    }

    pub fn side(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.side >> i & 1 == 1).collect()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.side >> point & 1 == 1
    }

    /// Whether the cut separates `i` and `j`.
    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.contains(i) != self.contains(j)
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |mask: u64| {
            (0..self.n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}}}|{{{}}}", side(self.side), side(self.other_mask()))
    }
}

impl fmt::Debug for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Cut {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.side().serialize(serializer)
    }
}

/// Wire form of a decomposition:
/// `{"n": 3, "cuts": [{"side": [0], "weight": "1/2"}]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionDoc {
    n: usize,
    cuts: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    side: Vec<usize>,
    weight: Rational,
}

impl TryFrom<DecompositionDoc> for CutDecomposition {
    type Error = CutError;

    fn try_from(doc: DecompositionDoc) -> Result<Self, CutError> {
        let terms = doc
            .cuts
            .into_iter()
            .map(|t| Ok((Cut::from_side(doc.n, &t.side)?, t.weight)))
            .collect::<Result<Vec<_>, CutError>>()?;
        CutDecomposition::new(doc.n, terms)
    }
}

impl Serialize for CutDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DecompositionDoc {
            n: self.n,
            cuts: self
                .terms
                .iter()
                .map(|(c, w)| TermDoc {
                    side: c.side(),
                    weight: w.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// The cut pseudometric: 1 across the cut, 0 otherwise.
pub fn cut_metric(c: &Cut, i: usize, j: usize) -> u8 {
    c.separates(i, j) as u8
}

/// All `2^(n-1) - 1` cuts of `0..n`, ordered by canonical side bitmask.
pub fn all_cuts(n: usize, limit: usize) -> Result<Vec<Cut>, CutError> {
    if n > limit || n > 63 {
        return Err(CutError::TooManyPoints {
            n,
            limit: limit.min(63),
        });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let count = (1u64 << (n - 1)) - 1;
    Ok((0..count)
        .map(|s| Cut {
            n,
            side: (s << 1) | 1,
        })
        .collect())
}

/// A positive combination `sum weight_c * delta_c` of distinct cuts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Deserialize)]
#[serde(try_from = "DecompositionDoc")]
pub struct CutDecomposition {
    n: usize,
    terms: Vec<(Cut, Rational)>,
}

impl CutDecomposition {
    pub fn new(n: usize, terms: Vec<(Cut, Rational)>) -> Result<Self, CutError> {
        let mut seen = BTreeSet::new();
        for (c, w) in &terms {
            if c.n != n {
                return Err(CutError::AmbientMismatch(n, c.n));
            }
            if !w.is_positive() {
                return Err(CutError::NonPositiveWeight(w.clone()));
            }
            if !seen.insert(*c) {
                return Err(CutError::DuplicateCut(*c));
            }
        }
        Ok(CutDecomposition { n, terms })
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Cut, Rational)] {
        &self.terms
    }

    pub fn cuts(&self) -> Vec<Cut> {
        self.terms.iter().map(|(c, _)| *c).collect()
    }

    pub fn weight(&self, index: usize) -> &Rational {
        &self.terms[index].1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The pseudometric `sum weight_c * delta_c`.
pub fn evaluate_decomposition(dec: &CutDecomposition) -> FinitePseudometricSpace {
    FinitePseudometricSpace::from_fn_unchecked(dec.n, |i, j| {
        dec.terms
            .iter()
            .filter(|(c, _)| c.separates(i, j))
            .map(|(_, w)| w)
            .sum()
    })
}

/// Writes `d` as a nonnegative combination of cut pseudometrics, dropping
/// zero-weight cuts. Which decomposition comes back is determined by the
/// pivot rule; only `evaluate_decomposition(result) == d` is guaranteed.
pub fn decompose(d: &FinitePseudometricSpace) -> Result<CutDecomposition, CutError> {
    decompose_with_limit(d, DEFAULT_MAX_CUT_POINTS)
}

pub fn decompose_with_limit(
    d: &FinitePseudometricSpace,
    limit: usize,
) -> Result<CutDecomposition, CutError> {
    let count = all_cuts(d.len(), limit)?.len();
    let order: Vec<usize> = (0..count).collect();
    decompose_with_order(d, &order, limit)
}

/// Cut indices ordered by the size of the smaller side, then by side
/// bitmask. Used as an LP column order it lets single-point cuts enter the
/// basis first.
pub fn small_side_first_order(cuts: &[Cut]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..cuts.len()).collect();
    order.sort_by_key(|&i| {
        let c = &cuts[i];
        let small = c.side_mask().count_ones().min(c.other_mask().count_ones());
        (small, c.side_mask())
    });
    order
}

/// [`decompose`] with the LP columns visited in `order` (a permutation of
/// cut indices in [`all_cuts`] order). Different orders may produce
/// different decompositions of the same pseudometric.
pub fn decompose_with_order(
    d: &FinitePseudometricSpace,
    order: &[usize],
    limit: usize,
) -> Result<CutDecomposition, CutError> {
    let n = d.len();
    let cuts = all_cuts(n, limit)?;
    assert_eq!(order.len(), cuts.len(), "order must permute the cut list");

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let a: Vec<Vec<Rational>> = pairs
        .iter()
        .map(|&(i, j)| {
            order
                .iter()
                .map(|&c| Rational::from_integer(cut_metric(&cuts[c], i, j) as i64))
                .collect()
        })
        .collect();
    let b: Vec<Rational> = pairs.iter().map(|&(i, j)| d.dist(i, j).clone()).collect();

    let x = lp::feasible_point(&a, &b).ok_or(CutError::NotInCutCone)?;
    let mut weights: Vec<Option<Rational>> = vec![None; cuts.len()];
    for (col, value) in x.into_iter().enumerate() {
        if value.is_positive() {
            weights[order[col]] = Some(value);
        }
    }
    let terms = cuts
        .into_iter()
        .zip(weights)
        .filter_map(|(c, w)| w.map(|w| (c, w)))
        .collect();
    Ok(CutDecomposition { n, terms })
}

/// Membership in the cut cone.
pub fn is_in_cut_cone(d: &FinitePseudometricSpace, limit: usize) -> Result<bool, CutError> {
    match decompose_with_limit(d, limit) {
        Ok(_) => Ok(true),
        Err(CutError::NotInCutCone) => Ok(false),
        Err(e) => Err(e),
    }
}
