//! Exact minimum-distortion correspondence search.
//!
//! Pairs `(x, y)` are indexed `x * ny + y`, which is also their lexicographic
//! order. For a threshold `t`, two pairs are compatible when
//! `|d(x, x') - d(y, y')| <= t`; a correspondence with distortion `<= t` is
//! exactly a set of pairwise compatible pairs covering every point of both
//! spaces. The minimum distortion is found by bisection over the finite set
//! of attainable distortion values, each step solved by a covering-clique
//! backtracking search.

use super::pairset::{PairSet, CAPACITY};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

pub(crate) struct CorrespondenceSearch {
    nx: usize,
    ny: usize,
    /// Sorted distinct values of `|d(x,x') - d(y,y')|`; always contains 0.
    levels: Vec<Rational>,
    /// `rank[p * np + q]` indexes `levels`.
    rank: Vec<u16>,
    rows: Vec<PairSet>,
    cols: Vec<PairSet>,
    x_twin: Vec<usize>,
    y_twin: Vec<usize>,
    lower: usize,
    upper: usize,
}

/// Points `u, v` are twins when swapping them is an isometry. Returns, for
/// every point, the smallest point in its twin class.
fn twin_classes(space: &FiniteMetricSpace) -> Vec<usize> {
    let n = space.len();
    let twins = |u: usize, v: usize| {
        (0..n).all(|z| z == u || z == v || space.dist(u, z) == space.dist(v, z))
    };
    (0..n)
        .map(|v| (0..=v).find(|&u| twins(u, v)).unwrap())
        .collect()
}

impl CorrespondenceSearch {
    pub(crate) fn new(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Self {
        let (nx, ny) = (x.len(), y.len());
        let np = nx * ny;
        assert!(np <= CAPACITY && nx <= 64 && ny <= 64);

        let mut diffs = Vec::with_capacity(np * np);
        for p in 0..np {
            let (px, py) = (p / ny, p % ny);
            for q in 0..np {
                let (qx, qy) = (q / ny, q % ny);
                diffs.push((x.dist(px, qx) - y.dist(py, qy)).abs());
            }
        }
        let mut levels = diffs.clone();
        levels.sort();
        levels.dedup();
        let rank = diffs
            .iter()
            .map(|v| levels.binary_search(v).unwrap() as u16)
            .collect();

        let rows = (0..nx)
            .map(|i| {
                let mut s = PairSet::default();
                (0..ny).for_each(|j| s.insert(i * ny + j));
                s
            })
            .collect();
        let cols = (0..ny)
            .map(|j| {
                let mut s = PairSet::default();
                (0..nx).for_each(|i| s.insert(i * ny + j));
                s
            })
            .collect();

        // 2 d_GH >= |diam X - diam Y| and 2 d_GH <= max(diam X, diam Y); both
        // values are themselves attainable distortions.
        let (dx, dy) = (x.diam(), y.diam());
        let lower_value = (&dx - &dy).abs();
        let lower = levels.partition_point(|v| *v < lower_value);
        let upper = levels.binary_search(&dx.max(dy)).unwrap();

        CorrespondenceSearch {
            nx,
            ny,
            levels,
            rank,
            rows,
            cols,
            x_twin: twin_classes(x),
            y_twin: twin_classes(y),
            lower,
            upper,
        }
    }

    fn compat(&self, level: usize) -> Vec<PairSet> {
        let np = self.nx * self.ny;
        (0..np)
            .map(|p| {
                let mut s = PairSet::default();
                let row = &self.rank[p * np..(p + 1) * np];
                for (q, &r) in row.iter().enumerate() {
                    if r as usize <= level {
                        s.insert(q);
                    }
                }
                s
            })
            .collect()
    }

    /// Whether some correspondence extending `forced`, using otherwise only
    /// pairs in `allowed`, has distortion at most `levels[level]`.
    fn feasible(
        &self,
        compat: &[PairSet],
        forced: &[usize],
        allowed: PairSet,
        symmetry: bool,
    ) -> bool {
        let mut cand = allowed;
        let (mut cov_x, mut cov_y) = (0u64, 0u64);
        for &p in forced {
            if !forced.iter().all(|&q| compat[p].contains(q)) {
                return false;
            }
            cand = cand.and(&compat[p]);
            cov_x |= 1 << (p / self.ny);
            cov_y |= 1 << (p % self.ny);
        }
        let mut walker = Walker {
            search: self,
            compat,
            symmetry,
            full_x: full_mask(self.nx),
            full_y: full_mask(self.ny),
        };
        walker.run(cand, cov_x, cov_y)
    }

    /// Index into `levels` of the minimum distortion.
    fn min_level(&self) -> usize {
        let np = self.nx * self.ny;
        let (mut lo, mut hi) = (self.lower, self.upper);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.feasible(&self.compat(mid), &[], PairSet::full(np), true) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// Minimum distortion over all correspondences, i.e. `2 d_GH`.
    pub(crate) fn min_distortion(&self) -> Rational {
        self.levels[self.min_level()].clone()
    }

    /// Minimum distortion together with the lexicographically least
    /// correspondence (as a sorted pair list) attaining it.
    pub(crate) fn solve(&self) -> (Rational, Vec<(usize, usize)>) {
        let level = self.min_level();
        let compat = self.compat(level);
        let np = self.nx * self.ny;
        let (full_x, full_y) = (full_mask(self.nx), full_mask(self.ny));

        let mut chosen: Vec<usize> = Vec::new();
        let (mut cov_x, mut cov_y) = (0u64, 0u64);
        let mut next = 0;
        while cov_x != full_x || cov_y != full_y {
            let p = (next..np)
                .find(|&p| {
                    chosen.push(p);
                    let mut allowed = PairSet::default();
                    ((p + 1)..np).for_each(|q| allowed.insert(q));
                    let ok = self.feasible(&compat, &chosen, allowed, false);
                    chosen.pop();
                    ok
                })
                .expect("a correspondence exists at the minimal level");
            chosen.push(p);
            cov_x |= 1 << (p / self.ny);
            cov_y |= 1 << (p % self.ny);
            next = p + 1;
        }
        let pairs = chosen.iter().map(|&p| (p / self.ny, p % self.ny)).collect();
        (self.levels[level].clone(), pairs)
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

struct Walker<'a> {
    search: &'a CorrespondenceSearch,
    compat: &'a [PairSet],
    symmetry: bool,
    full_x: u64,
    full_y: u64,
}

impl Walker<'_> {
    fn run(&mut self, cand: PairSet, cov_x: u64, cov_y: u64) -> bool {
        if cov_x == self.full_x && cov_y == self.full_y {
            return true;
        }
        let s = self.search;
        // Branch on the uncovered point with the fewest remaining options.
        let mut best: Option<(u32, PairSet, bool)> = None;
        for x in (0..s.nx).filter(|&x| cov_x >> x & 1 == 0) {
            let opts = cand.and(&s.rows[x]);
            let c = opts.count();
            if c == 0 {
                return false;
            }
            if best.as_ref().is_none_or(|b| c < b.0) {
                best = Some((c, opts, true));
            }
        }
        for y in (0..s.ny).filter(|&y| cov_y >> y & 1 == 0) {
            let opts = cand.and(&s.cols[y]);
            let c = opts.count();
            if c == 0 {
                return false;
            }
            if best.as_ref().is_none_or(|b| c < b.0) {
                best = Some((c, opts, false));
            }
        }
        let (_, options, on_x) = best.expect("some point is uncovered");

        let mut cand = cand;
        let mut tried_classes = 0u64;
        for p in options.iter() {
            let (px, py) = (p / s.ny, p % s.ny);
            if self.symmetry {
                // Untouched twins of an already-tried partner lead to an
                // isometric subproblem.
                let (partner, covered, classes) = if on_x {
                    (py, cov_y, &s.y_twin)
                } else {
                    (px, cov_x, &s.x_twin)
                };
                if covered >> partner & 1 == 0 {
                    let class = classes[partner];
                    if tried_classes >> class & 1 == 1 {
                        cand.remove(p);
                        continue;
                    }
                    tried_classes |= 1 << class;
                }
            }
            if self.run(cand.and(&self.compat[p]), cov_x | 1 << px, cov_y | 1 << py) {
                return true;
            }
            cand.remove(p);
        }
        false
    }
}
