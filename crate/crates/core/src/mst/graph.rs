use serde::{Deserialize, Serialize};

use super::dsu::DisjointSets;
use super::profile::{MergeEvent, MergeProfile};
use super::tree::{SpanningTree, TreeEdge};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    /// Nonnegative weight; `f64::INFINITY` marks an absent edge.
    pub w: f64,
}

/// Undirected weighted graph given by an edge list.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<GraphEdge>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize) -> Self {
        WeightedGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from `(u, v, w)` triples.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Self::new(vertex_count);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Complete graph with weight `weight(u, v)` for `u < v`.
    pub fn complete<F: FnMut(usize, usize) -> f64>(vertex_count: usize, mut weight: F) -> Result<Self> {
        let mut g = Self::new(vertex_count);
        for u in 0..vertex_count {
            for v in u + 1..vertex_count {
                g.add_edge(u, v, weight(u, v))?;
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        if u == v {
            return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
        }
        if u.max(v) >= self.vertex_count {
            return Err(Error::InvalidInstance(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.vertex_count
            )));
        }
        if !(w >= 0.0) {
            return Err(Error::InvalidInstance(format!("edge weight {w} is not a nonnegative number")));
        }
        self.edges.push(GraphEdge { u, v, w });
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// Indices of finite edges in Kruskal order: `(w, lower vertex, upper
    /// vertex, edge index)`.
    pub(crate) fn sorted_finite_edges(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.edges.len())
            .filter(|&i| self.edges[i].w.is_finite())
            .collect();
        idx.sort_by(|&a, &b| {
            let (ea, eb) = (&self.edges[a], &self.edges[b]);
            ea.w.total_cmp(&eb.w)
                .then((ea.u.min(ea.v), ea.u.max(ea.v)).cmp(&(eb.u.min(eb.v), eb.u.max(eb.v))))
                .then(a.cmp(&b))
        });
        idx
    }

    /// Nearest neighbor of every vertex along finite edges, ties broken by
    /// Kruskal order.
    pub fn nearest_neighbors(&self) -> Vec<Option<usize>> {
        let mut nn = vec![None; self.vertex_count];
        for i in self.sorted_finite_edges() {
            let e = self.edges[i];
            if nn[e.u].is_none() {
                nn[e.u] = Some(e.v);
            }
            if nn[e.v].is_none() {
                nn[e.v] = Some(e.u);
            }
        }
        nn
    }
}

/// Minimum spanning tree and merge profile by Kruskal's algorithm.
///
/// Equal weights are ordered by the lower, then upper endpoint, then edge
/// index. Edges of infinite weight are ignored.
pub fn kruskal(graph: &WeightedGraph) -> Result<(SpanningTree, MergeProfile)> {
    let m = graph.vertex_count();
    if m == 0 {
        return Err(Error::EmptySet("graph has no vertices"));
    }
    let mut dsu = DisjointSets::new(m);
    let mut tree = Vec::with_capacity(m - 1);
    let mut events = Vec::with_capacity(m - 1);
    for i in graph.sorted_finite_edges() {
        let e = graph.edges[i];
        if let Some((size_a, size_b)) = dsu.union(e.u, e.v) {
            tree.push(TreeEdge { u: e.u, v: e.v, length: e.w });
            events.push(MergeEvent { z: e.w, size_a, size_b });
            if dsu.components() == 1 {
                break;
            }
        }
    }
    if dsu.components() > 1 {
        let r0 = dsu.find(0);
        let v = (1..m).find(|&v| dsu.find(v) != r0).expect("more than one component");
        return Err(Error::Disconnected { u: 0, v });
    }
    Ok((SpanningTree::new(m, tree)?, MergeProfile::new(m, events)))
}
