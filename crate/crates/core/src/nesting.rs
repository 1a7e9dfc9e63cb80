//! Nesting hypergraphs of cut families and the simple graphs derived from them.
//!
//! Vertices are cuts. Two cuts form an edge when they are incompatible (all
//! four side intersections nonempty); three cuts form an edge when they are an
//! asteroid triplet (one side from each can be chosen pairwise disjoint).
//! Replacing every triple by one of its pairs yields a family of simple
//! graphs; the hypergraph is `m`-colorable iff some graph in the family is.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cut::Cut;
use crate::graph::SimpleGraph;

/// Default bound on the number of triple edges [`enumerate_graph_family`]
/// accepts (`3^12` choice vectors).
pub const DEFAULT_FAMILY_BUDGET: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NestingError {
    #[error("cuts live on different point sets ({0} vs {1} points)")]
    AmbientMismatch(usize, usize),
    #[error("cut {0} appears more than once")]
    DuplicateCut(Cut),
    #[error("hyperedge refers to vertex {vertex} but there are only {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("malformed hyperedge {0:?}")]
    MalformedEdge(Vec<usize>),
    #[error("pair {0:?} of triple {1:?} is also a pair edge")]
    TripleContainsPairEdge((usize, usize), [usize; 3]),
    #[error("{triples} triple edges exceed the family budget of {budget}")]
    FamilyTooLarge { triples: usize, budget: usize },
}

/// Whether all four intersections of the two cuts' sides are nonempty.
pub fn incompatible(a: &Cut, b: &Cut) -> Result<bool, NestingError> {
    if a.point_count() != b.point_count() {
        return Err(NestingError::AmbientMismatch(
            a.point_count(),
            b.point_count(),
        ));
    }
    let (a0, a1) = (a.side_mask(), a.other_mask());
    let (b0, b1) = (b.side_mask(), b.other_mask());
    Ok(a0 & b0 != 0 && a0 & b1 != 0 && a1 & b0 != 0 && a1 & b1 != 0)
}

/// Whether one side of each cut can be chosen so the three are pairwise
/// disjoint.
pub fn asteroid_triplet(a: &Cut, b: &Cut, c: &Cut) -> Result<bool, NestingError> {
    for other in [b, c] {
        if other.point_count() != a.point_count() {
            return Err(NestingError::AmbientMismatch(
                a.point_count(),
                other.point_count(),
            ));
        }
    }
    if a == b || a == c {
        return Err(NestingError::DuplicateCut(*a));
    }
    if b == c {
        return Err(NestingError::DuplicateCut(*b));
    }
    let sides = |x: &Cut| [x.side_mask(), x.other_mask()];
    Ok(sides(a).into_iter().any(|sa| {
        sides(b)
            .into_iter()
            .any(|sb| sa & sb == 0 && sides(c).into_iter().any(|sc| sa & sc == 0 && sb & sc == 0))
    }))
}

/// A hypergraph on `0..n` with 2-element and 3-element edges, where no pair
/// contained in a triple edge is itself a pair edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypergraph {
    #[serde(skip)]
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
    triples: BTreeSet<[usize; 3]>,
}

impl Hypergraph {
    pub fn new(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        triples: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self, NestingError> {
        let mut ps = BTreeSet::new();
        for (u, v) in pairs {
            if u == v {
                return Err(NestingError::MalformedEdge(vec![u, v]));
            }
            check_range(&[u, v], n)?;
            ps.insert((u.min(v), u.max(v)));
        }
        let mut ts = BTreeSet::new();
        for t in triples {
            let mut s = t;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(NestingError::MalformedEdge(t.to_vec()));
            }
            check_range(&s, n)?;
            for p in [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])] {
                if ps.contains(&p) {
                    return Err(NestingError::TripleContainsPairEdge(p, s));
                }
            }
            ts.insert(s);
        }
        Ok(Hypergraph {
            n,
            pairs: ps,
            triples: ts,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn pair_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn triple_edges(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.triples.iter().copied()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    /// Whether `colors` leaves every pair and triple edge non-monochromatic.
    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.n
            && self.pairs.iter().all(|&(u, v)| colors[u] != colors[v])
            && self
                .triples
                .iter()
                .all(|&[a, b, c]| !(colors[a] == colors[b] && colors[b] == colors[c]))
    }

    /// Same edges with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        Hypergraph::new(
            self.n,
            self.pairs.iter().map(|&(u, v)| (perm[u], perm[v])),
            self.triples.iter().map(|t| t.map(|v| perm[v])),
        )
        .expect("relabeling preserves validity")
    }
}

fn check_range(vs: &[usize], n: usize) -> Result<(), NestingError> {
    match vs.iter().find(|&&v| v >= n) {
        Some(&vertex) => Err(NestingError::VertexOutOfRange { vertex, n }),
        None => Ok(()),
    }
}

/// The nesting hypergraph of an ordered cut family; vertex `i` is `cuts[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NestingHypergraph {
    pub cuts: Vec<Cut>,
    #[serde(flatten)]
    pub hypergraph: Hypergraph,
}

pub fn build_nesting_hypergraph(cuts: &[Cut]) -> Result<NestingHypergraph, NestingError> {
    let k = cuts.len();
    let mut seen = BTreeSet::new();
    for c in cuts {
        if c.point_count() != cuts[0].point_count() {
            return Err(NestingError::AmbientMismatch(
                cuts[0].point_count(),
                c.point_count(),
            ));
        }
        if !seen.insert(*c) {
            return Err(NestingError::DuplicateCut(*c));
        }
    }
    let mut pairs = BTreeSet::new();
    for i in 0..k {
        for j in (i + 1)..k {
            if incompatible(&cuts[i], &cuts[j])? {
                pairs.insert((i, j));
            }
        }
    }
    let mut triples = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            for l in (j + 1)..k {
                if asteroid_triplet(&cuts[i], &cuts[j], &cuts[l])? {
                    triples.push([i, j, l]);
                }
            }
        }
    }
    // Pairwise disjoint sides make each pair of an asteroid triplet
    // compatible, so Hypergraph::new never rejects here unless the
    // predicates above are wrong.
    let hypergraph = Hypergraph::new(k, pairs, triples)?;
    Ok(NestingHypergraph {
        cuts: cuts.to_vec(),
        hypergraph,
    })
}

/// Distinct labeled graphs obtained by replacing each triple edge with one of
/// its three pairs, on top of the pair edges. Sorted by edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphFamily {
    #[serde(skip)]
    n: usize,
    graphs: Vec<SimpleGraph>,
}

impl GraphFamily {
    pub fn graphs(&self) -> &[SimpleGraph] {
        &self.graphs
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
}

pub fn enumerate_graph_family(h: &Hypergraph, budget: usize) -> Result<GraphFamily, NestingError> {
    let triples: Vec<[usize; 3]> = h.triples.iter().copied().collect();
    if triples.len() > budget {
        return Err(NestingError::FamilyTooLarge {
            triples: triples.len(),
            budget,
        });
    }
    let mut found: BTreeSet<BTreeSet<(usize, usize)>> = BTreeSet::new();
    let mut choice = vec![0u8; triples.len()];
    loop {
        let mut edges = h.pairs.clone();
        for (t, &c) in triples.iter().zip(&choice) {
            let [a, b, d] = *t;
            edges.insert([(a, b), (a, d), (b, d)][c as usize]);
        }
        found.insert(edges);

        // Odometer over choice vectors, last triple fastest.
        let mut i = choice.len();
        loop {
            if i == 0 {
                let graphs = found
                    .into_iter()
                    .map(|e| SimpleGraph::from_edge_set(h.n, e))
                    .collect();
                return Ok(GraphFamily { n: h.n, graphs });
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < 3 {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// A coloring with at most `m` colors leaving no edge monochromatic, found
/// by backtracking over vertices in index order.
pub fn hypergraph_colorable(h: &Hypergraph, m: usize) -> Option<Vec<usize>> {
    let n = h.n;
    if n == 0 {
        return Some(Vec::new());
    }
    if m == 0 {
        return None;
    }
    // Edges indexed by their largest vertex, checked when that vertex is colored.
    let mut pair_back: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &h.pairs {
        pair_back[v].push(u);
    }
    let mut triple_back: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &[a, b, c] in &h.triples {
        triple_back[c].push((a, b));
    }
    let mut colors = vec![usize::MAX; n];
    fn go(
        v: usize,
        used: usize,
        m: usize,
        colors: &mut Vec<usize>,
        pair_back: &[Vec<usize>],
        triple_back: &[Vec<(usize, usize)>],
    ) -> bool {
        if v == colors.len() {
            return true;
        }
        for c in 0..m.min(used + 1) {
            let ok = pair_back[v].iter().all(|&u| colors[u] != c)
                && triple_back[v]
                    .iter()
                    .all(|&(a, b)| !(colors[a] == c && colors[b] == c));
            if ok {
                colors[v] = c;
                if go(v + 1, used.max(c + 1), m, colors, pair_back, triple_back) {
                    return true;
                }
            }
        }
        colors[v] = usize::MAX;
        false
    }
    go(0, 0, m, &mut colors, &pair_back, &triple_back).then_some(colors)
}

/// Least `m` with an `m`-coloring, and such a coloring. Zero for an empty
/// vertex set.
pub fn hypergraph_chromatic_number(h: &Hypergraph) -> (usize, Vec<usize>) {
    (0..=h.n)
        .find_map(|m| hypergraph_colorable(h, m).map(|c| (m, c)))
        .expect("n colors always suffice")
}
