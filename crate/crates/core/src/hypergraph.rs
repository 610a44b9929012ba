//! Hypergraphs over a finite ground set, with upward-closure and undercover
//! predicates.
//!
//! A hypergraph remembers which vertices have been removed by [`Hypergraph::restrict`]
//! rather than re-indexing, so vertex ids stay stable across the rounds of a
//! process. [`Hypergraph::reindexed`] produces the compact form used for
//! serialization.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    ground_size: usize,
    removed: VertexSet,
    edges: Vec<VertexSet>,
}

impl Hypergraph {
    pub fn new(ground_size: usize, edges: Vec<VertexSet>) -> Result<Self> {
        for edge in &edges {
            if let Some(v) = edge.max_vertex().filter(|&v| v >= ground_size) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    ground_size,
                });
            }
        }
        Ok(Self {
            ground_size,
            removed: VertexSet::new(),
            edges,
        })
    }

    /// Convenience constructor for literals; panics on out-of-range vertices.
    pub fn from_edges<I, E>(ground_size: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        let edges = edges.into_iter().map(|e| e.into_iter().collect()).collect();
        Self::new(ground_size, edges).expect("edge outside ground set")
    }

    /// Total size of the original ground set, including removed vertices.
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn removed(&self) -> &VertexSet {
        &self.removed
    }

    /// Vertices still in the ground set, ascending.
    pub fn active_vertices(&self) -> Vec<usize> {
        (0..self.ground_size)
            .filter(|&v| !self.removed.contains(v))
            .collect()
    }

    pub fn active_size(&self) -> usize {
        self.ground_size - self.removed.len()
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// ℓ(H): the largest edge size, or `None` for a hypergraph without edges.
    pub fn max_edge_size(&self) -> Option<usize> {
        self.edges.iter().map(VertexSet::len).max()
    }

    pub fn has_empty_edge(&self) -> bool {
        self.edges.iter().any(VertexSet::is_empty)
    }

    /// Union of all edges.
    pub fn support(&self) -> VertexSet {
        let mut out = VertexSet::new();
        for e in &self.edges {
            out.union_with(e);
        }
        out
    }

    /// True iff some edge is a subset of `w`, i.e. `w` lies in the upward
    /// closure. The empty hypergraph contains nothing.
    pub fn contains_edge(&self, w: &VertexSet) -> bool {
        self.edges.iter().any(|s| s.is_subset(w))
    }

    /// Lexicographically least edge contained in `w`.
    pub fn least_edge_within(&self, w: &VertexSet) -> Option<&VertexSet> {
        self.edges.iter().filter(|s| s.is_subset(w)).min()
    }

    /// True iff every edge of `h` contains some edge of `self`.
    pub fn undercovers(&self, h: &Hypergraph) -> bool {
        h.edges.iter().all(|s| self.contains_edge(s))
    }

    /// Removes duplicate and non-minimal edges. The upward closure is
    /// unchanged; edges come back in lexicographic order.
    pub fn minimize(&self) -> Hypergraph {
        let mut by_size: Vec<&VertexSet> = self.edges.iter().collect();
        by_size.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        by_size.dedup();
        let mut kept: Vec<VertexSet> = Vec::new();
        for e in by_size {
            if !kept.iter().any(|k| k.is_subset(e)) {
                kept.push(e.clone());
            }
        }
        kept.sort();
        Hypergraph {
            ground_size: self.ground_size,
            removed: self.removed.clone(),
            edges: kept,
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] < w[1])
            && self.edges.iter().enumerate().all(|(i, a)| {
                self.edges
                    .iter()
                    .enumerate()
                    .all(|(j, b)| i == j || !a.is_subset(b))
            })
    }

    /// `{S \ W : S ∈ H}` on the ground set `X \ W`. Edge order and
    /// multiplicity are preserved; `W` is marked removed.
    pub fn restrict(&self, w: &VertexSet) -> Hypergraph {
        Hypergraph {
            ground_size: self.ground_size,
            removed: self.removed.union(w).intersection(&VertexSet::full(self.ground_size)),
            edges: self.edges.iter().map(|s| s.difference(w)).collect(),
        }
    }

    /// Adds `extra` isolated vertices to the ground set.
    pub fn pad(&self, extra: usize) -> Hypergraph {
        Hypergraph {
            ground_size: self.ground_size + extra,
            removed: self.removed.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Distinct edges in lexicographic order.
    pub(crate) fn from_distinct(
        base: &Hypergraph,
        edges: BTreeSet<VertexSet>,
        removed: VertexSet,
    ) -> Hypergraph {
        Hypergraph {
            ground_size: base.ground_size,
            removed,
            edges: edges.into_iter().collect(),
        }
    }

    /// Compact copy on `0..active_size()`: active vertices are renumbered in
    /// ascending order and removed vertices dropped.
    pub fn reindexed(&self) -> Hypergraph {
        if self.removed.is_empty() {
            return self.clone();
        }
        let mut index = vec![usize::MAX; self.ground_size];
        for (new, old) in self.active_vertices().into_iter().enumerate() {
            index[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|v| index[v]).collect())
            .collect();
        Hypergraph {
            ground_size: self.active_size(),
            removed: VertexSet::new(),
            edges,
        }
    }

    /// Largest edge count incident to any vertex (0 for no edges).
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.ground_size];
        for e in &self.edges {
            for v in e {
                deg[v] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }
}
