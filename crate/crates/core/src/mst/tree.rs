use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dsu::DisjointSets;
use super::profile::{MergeEvent, MergeProfile};
use crate::error::{Error, Result};

/// Tree edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// Spanning tree over vertices `0..vertex_count`.
///
/// Edges are kept sorted by `(u, v)` so that every derived quantity (costs,
/// serialization) is independent of the solver that produced the tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    vertex_count: usize,
    edges: Vec<TreeEdge>,
    degrees: Vec<u32>,
}

impl SpanningTree {
    /// Validates that `edges` form a spanning tree on `vertex_count` vertices.
    pub fn new(vertex_count: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::TreeMismatch("tree needs at least one vertex".into()));
        }
        if edges.len() + 1 != vertex_count {
            return Err(Error::TreeMismatch(format!(
                "{} edges for {} vertices",
                edges.len(),
                vertex_count
            )));
        }
        let mut dsu = DisjointSets::new(vertex_count);
        let mut degrees = vec![0u32; vertex_count];
        let mut canon = Vec::with_capacity(edges.len());
        for e in edges {
            let (u, v) = (e.u.min(e.v), e.u.max(e.v));
            if v >= vertex_count || u == v {
                return Err(Error::TreeMismatch(format!("invalid edge ({}, {})", e.u, e.v)));
            }
            if !(e.length >= 0.0) {
                return Err(Error::TreeMismatch(format!("invalid length {}", e.length)));
            }
            if dsu.union(u, v).is_none() {
                return Err(Error::TreeMismatch(format!("edge ({u}, {v}) closes a cycle")));
            }
            degrees[u] += 1;
            degrees[v] += 1;
            canon.push(TreeEdge { u, v, length: e.length });
        }
        canon.sort_by_key(|a| (a.u, a.v));
        Ok(SpanningTree {
            vertex_count,
            edges: canon,
            degrees,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `sum length^p` over the edges.
    pub fn cost(&self, p: f64) -> f64 {
        if p == 1.0 {
            self.edges.iter().map(|e| e.length).sum()
        } else {
            self.edges.iter().map(|e| e.length.powf(p)).sum()
        }
    }

    /// Longest edge, 0 for a single vertex.
    pub fn bottleneck(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        let (u, v) = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(u, v)))
            .is_ok()
    }

    /// Merge profile of Kruskal's algorithm run on the tree with weights
    /// `length^p`. Kruskal merges along exactly the MST edges, so for a
    /// minimum spanning tree this is the profile of the full graph.
    pub fn merge_profile(&self, p: f64) -> MergeProfile {
        let mut order: Vec<(f64, usize, usize)> = self
            .edges
            .iter()
            .map(|e| (if p == 1.0 { e.length } else { e.length.powf(p) }, e.u, e.v))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        let mut dsu = DisjointSets::new(self.vertex_count);
        let events = order
            .into_iter()
            .map(|(z, u, v)| {
                let (size_a, size_b) = dsu.union(u, v).expect("tree edges never close a cycle");
                MergeEvent { z, size_a, size_b }
            })
            .collect();
        MergeProfile::new(self.vertex_count, events)
    }
}
