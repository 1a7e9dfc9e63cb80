//! Simple undirected graphs on vertices `0..n`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("edge endpoint {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
}

/// Edges are stored normalized as `(u, v)` with `u < v`, in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc")]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// Wire form: `{"n": 4, "edges": [[0, 1], [1, 2]]}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphDoc> for SimpleGraph {
    type Error = GraphError;

    fn try_from(doc: GraphDoc) -> Result<Self, GraphError> {
        SimpleGraph::new(doc.n, doc.edges)
    }
}

impl SimpleGraph {
    /// Rejects loops, out-of-range endpoints and repeated edges (in either
    /// orientation).
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if let Some(vertex) = [u, v].into_iter().find(|&w| w >= n) {
                return Err(GraphError::VertexOutOfRange { vertex, n });
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(SimpleGraph { n, edges: set })
    }

    /// Like [`SimpleGraph::new`] but silently merges repeated edges.
    pub(crate) fn from_edge_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < n));
        SimpleGraph { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        SimpleGraph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        SimpleGraph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.edges.insert((0, n - 1));
        }
        g
    }

    /// Labeled graph whose edge set is given by the bits of `mask` over the
    /// pairs `(u, v)`, `u < v`, in lexicographic order.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let edges = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        SimpleGraph { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Complement graph: same vertices, an edge exactly where `self` has none.
    pub fn complement(&self) -> SimpleGraph {
        let edges = (0..self.n)
            .flat_map(|u| ((u + 1)..self.n).map(move |v| (u, v)))
            .filter(|e| !self.edges.contains(e))
            .collect();
        SimpleGraph { n: self.n, edges }
    }

    /// Adjacency rows as bitmasks. Requires `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(
            self.n <= 64,
            "bitmask adjacency supports at most 64 vertices"
        );
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    /// Isomorphism key: the pair mask (pairs in lexicographic order, as in
    /// [`SimpleGraph::from_pair_mask`]) of the least relabeling that respects
    /// a degree-based vertex partition. Equal keys always mean isomorphic
    /// graphs. Isomorphic graphs get equal keys unless the relabeling search
    /// exceeds `max_relabelings`, in which case the identity labeling is used.
    pub fn isomorphism_key(&self, max_relabelings: usize) -> Option<u128> {
        let n = self.n;
        if n > 16 {
            return None;
        }
        let adj = self.adjacency_masks();
        let deg = |v: usize| adj[v].count_ones();
        let invariant = |v: usize| {
            let mut nbr: Vec<u32> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(deg).collect();
            nbr.sort_unstable();
            (deg(v), nbr)
        };
        let mut by_invariant: Vec<(_, usize)> = (0..n).map(|v| (invariant(v), v)).collect();
        by_invariant.sort();
        // cell[p] is the index of the cell position p belongs to.
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut cell_of_position = Vec::with_capacity(n);
        for (i, (inv, v)) in by_invariant.iter().enumerate() {
            if i == 0 || by_invariant[i - 1].0 != *inv {
                cells.push(Vec::new());
            }
            cells.last_mut().expect("pushed above").push(*v);
            cell_of_position.push(cells.len() - 1);
        }
        let mut relabelings: usize = 1;
        for c in &cells {
            for k in 2..=c.len() {
                relabelings = relabelings.saturating_mul(k);
            }
        }
        let pair_index = |q: usize, p: usize| q * (2 * n - q - 1) / 2 + (p - q - 1);
        if relabelings > max_relabelings {
            let mut key = 0u128;
            for &(u, v) in &self.edges {
                key |= 1 << pair_index(u, v);
            }
            return Some(key);
        }

        struct Search<'a> {
            adj: &'a [u64],
            cells: Vec<Vec<usize>>,
            cell_of_position: Vec<usize>,
            placed: Vec<usize>,
            used: u64,
            best: u128,
        }
        impl Search<'_> {
            fn go(&mut self, mask: u128, pair_index: &dyn Fn(usize, usize) -> usize) {
                let p = self.placed.len();
                if p == self.cell_of_position.len() {
                    self.best = self.best.min(mask);
                    return;
                }
                let cell = self.cell_of_position[p];
                for i in 0..self.cells[cell].len() {
                    let v = self.cells[cell][i];
                    if self.used >> v & 1 == 1 {
                        continue;
                    }
                    let mut next = mask;
                    for (q, &u) in self.placed.iter().enumerate() {
                        if self.adj[v] >> u & 1 == 1 {
                            next |= 1 << pair_index(q, p);
                        }
                    }
                    self.placed.push(v);
                    self.used |= 1 << v;
                    self.go(next, pair_index);
                    self.used &= !(1 << v);
                    self.placed.pop();
                }
            }
        }
        let mut search = Search {
            adj: &adj,
            cells,
            cell_of_position,
            placed: Vec::with_capacity(n),
            used: 0,
            best: u128::MAX,
        };
        search.go(0, &pair_index);
        Some(search.best)
    }
}

/// Complement graph of `graph`.
pub fn complement(graph: &SimpleGraph) -> SimpleGraph {
    graph.complement()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(SimpleGraph::new(3, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            SimpleGraph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(
            SimpleGraph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
    }

    fn relabel(g: &SimpleGraph, perm: &[usize]) -> SimpleGraph {
        SimpleGraph::new(g.vertex_count(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
    }

    #[test]
    fn isomorphism_keys() {
        // Exhaustive on 5 vertices: keys agree exactly on isomorphism classes.
        let perms: Vec<Vec<usize>> = {
            let mut out = Vec::new();
            let mut p: Vec<usize> = (0..5).collect();
            fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if k == 1 {
                    out.push(p.clone());
                    return;
                }
                for i in 0..k {
                    heap(k - 1, p, out);
                    let j = if k.is_multiple_of(2) { i } else { 0 };
                    p.swap(j, k - 1);
                }
            }
            heap(5, &mut p, &mut out);
            out
        };
        assert_eq!(perms.len(), 120);
        let mut classes = std::collections::BTreeSet::new();
        for mask in 0..1024u64 {
            let g = SimpleGraph::from_pair_mask(5, mask);
            let key = g.isomorphism_key(usize::MAX).unwrap();
            for p in &perms {
                assert_eq!(relabel(&g, p).isomorphism_key(usize::MAX), Some(key));
            }
            assert_eq!(u128::from(mask).count_ones(), key.count_ones());
            classes.insert(key);
        }
        // There are 34 graphs on five vertices up to isomorphism.
        assert_eq!(classes.len(), 34);
        // Truncated searches still never merge non-isomorphic graphs.
        let mut merged: std::collections::BTreeMap<u128, std::collections::BTreeSet<u128>> =
            Default::default();
        for mask in 0..1024u64 {
            let g = SimpleGraph::from_pair_mask(5, mask);
            let full = g.isomorphism_key(usize::MAX).unwrap();
            merged
                .entry(g.isomorphism_key(1).unwrap())
                .or_default()
                .insert(full);
        }
        assert!(merged.values().all(|fulls| fulls.len() == 1));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&SimpleGraph::complete(3)), SimpleGraph::empty(3));
        assert_eq!(
            complement(&SimpleGraph::path(3)),
            SimpleGraph::new(3, [(0, 2)]).unwrap()
        );
        for mask in 0..64 {
            let g = SimpleGraph::from_pair_mask(4, mask);
            assert_eq!(complement(&complement(&g)), g);
        }
    }

    #[test]
    fn pair_mask_enumerates_all_labeled_graphs() {
        let graphs: BTreeSet<_> = (0..1024)
            .map(|m| SimpleGraph::from_pair_mask(5, m))
            .collect();
        assert_eq!(graphs.len(), 1024);
        assert_eq!(SimpleGraph::cycle(5).edge_count(), 5);
        assert_eq!(SimpleGraph::cycle(5).degree(0), 2);
    }
}
