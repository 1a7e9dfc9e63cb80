//! Explicit rectilinear embeddings from a colored cut decomposition.
//!
//! Each color class is a family of pairwise compatible cuts without asteroid
//! triplets, so its cuts can be oriented to form an inclusion chain. Ordering
//! the points along that chain makes every cut an initial segment, and one
//! coordinate per class reproduces the weighted cut distances exactly.

use serde::Serialize;

use super::L1Error;
use crate::cut::{evaluate_decomposition, Cut, CutDecomposition};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    /// `coordinates[x][k]` is coordinate `k` of point `x`.
    pub coordinates: Vec<Vec<Rational>>,
    /// For each axis, a point order in which every cut of that axis is an
    /// initial segment.
    pub axis_orders: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn dimension(&self) -> usize {
        self.axis_orders.len()
    }
}

/// l1 distance between two coordinate vectors.
pub fn l1_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Orients every cut so that the chosen sides are totally ordered by
/// inclusion. Returns the chosen side masks, or `None` if impossible.
fn orient_as_chain(cuts: &[Cut]) -> Option<Vec<u64>> {
    fn nested(a: u64, b: u64) -> bool {
        a & b == a || a & b == b
    }
    fn go(cuts: &[Cut], chosen: &mut Vec<u64>) -> bool {
        let i = chosen.len();
        if i == cuts.len() {
            return true;
        }
        // The first cut's orientation is free: complementing every side maps
        // a chain to a chain.
        let options: &[u64] = if i == 0 {
            &[cuts[0].side_mask()]
        } else {
            &[cuts[i].side_mask(), cuts[i].other_mask()]
        };
        for &s in options {
            if chosen.iter().all(|&t| nested(s, t)) {
                chosen.push(s);
                if go(cuts, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(cuts.len());
    go(cuts, &mut chosen).then_some(chosen)
}

/// Builds an embedding into `colors`-dimensional rectilinear space from a
/// coloring of the decomposition's cuts with no monochromatic edge of the
/// nesting hypergraph, and verifies it against the decomposed pseudometric.
pub fn embed_from_coloring(
    dec: &CutDecomposition,
    coloring: &[usize],
    colors: usize,
) -> Result<Embedding, L1Error> {
    let n = dec.point_count();
    if coloring.len() != dec.len() || coloring.iter().any(|&c| c >= colors) {
        return Err(L1Error::InvalidColoring(format!(
            "expected {} cut colors below {colors}, got {coloring:?}",
            dec.len()
        )));
    }
    let mut coordinates = vec![vec![Rational::zero(); colors]; n];
    let mut axis_orders = Vec::with_capacity(colors);
    for color in 0..colors {
        let members: Vec<usize> = (0..dec.len()).filter(|&i| coloring[i] == color).collect();
        let cuts: Vec<Cut> = members.iter().map(|&i| dec.terms()[i].0).collect();
        let sides = orient_as_chain(&cuts).ok_or_else(|| L1Error::NoLinearRealization {
            color,
            cuts: cuts.iter().map(|c| c.to_string()).collect(),
        })?;
        for (&i, &side) in members.iter().zip(&sides) {
            for (x, coords) in coordinates.iter_mut().enumerate() {
                if side >> x & 1 == 1 {
                    coords[color] += dec.weight(i);
                }
            }
        }
        // Points in more (hence smaller) chosen sides come first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| {
            std::cmp::Reverse(sides.iter().filter(|&&s| s >> x & 1 == 1).count())
        });
        axis_orders.push(order);

        let min = coordinates
            .iter()
            .map(|c| c[color].clone())
            .min()
            .unwrap_or_else(Rational::zero);
        for coords in coordinates.iter_mut() {
            coords[color] = &coords[color] - &min;
        }
    }

    let target = evaluate_decomposition(dec);
    for x in 0..n {
        for y in (x + 1)..n {
            let got = l1_distance(&coordinates[x], &coordinates[y]);
            if got != *target.dist(x, y) {
                return Err(L1Error::EmbeddingMismatch {
                    x,
                    y,
                    expected: target.dist(x, y).clone(),
                    got,
                });
            }
        }
    }
    Ok(Embedding {
        coordinates,
        axis_orders,
    })
}
