use serde::{Deserialize, Serialize};

use super::dsu::DisjointSets;
use super::graph::{kruskal, WeightedGraph};
use super::tree::SpanningTree;
use crate::error::{Error, Result};

/// Partition of the vertices into classes of size at least `k`, with the
/// quotient graph and its MST.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GkReduction {
    pub k: usize,
    /// Classes in seed order; members sorted.
    pub classes: Vec<Vec<usize>>,
    /// Class index of every vertex.
    pub class_of: Vec<usize>,
    /// Quotient graph; the weight between two classes is the minimum
    /// weight of an edge joining them.
    pub reduced: WeightedGraph,
    pub reduced_tree: SpanningTree,
    pub reduced_cost: f64,
}

/// Builds the class partition during a Kruskal sweep.
///
/// A merge of two components below `k` into one of size at least `k` seeds a
/// new class holding the merged component. When a component below `k` merges
/// into a larger one, its vertices join the class of smallest index inside
/// the larger component. Equal weights follow Kruskal order.
pub fn gk_reduction(graph: &WeightedGraph, k: usize) -> Result<GkReduction> {
    let m = graph.vertex_count();
    if k > m {
        return Err(Error::NoPartition { k, m });
    }
    if k < 2 {
        return Err(Error::InvalidParameter(format!("threshold size must be at least 2, got {k}")));
    }
    let mut dsu = DisjointSets::new(m);
    // members of each component, keyed by DSU root
    let mut members: Vec<Vec<usize>> = (0..m).map(|v| vec![v]).collect();
    // smallest class index inside each component of size >= k, keyed by root
    let mut min_class: Vec<usize> = vec![usize::MAX; m];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![usize::MAX; m];

    for i in graph.sorted_finite_edges() {
        let e = graph.edges()[i];
        let (ra, rb) = (dsu.find(e.u), dsu.find(e.v));
        if ra == rb {
            continue;
        }
        let (sa, sb) = (members[ra].len(), members[rb].len());
        let mut ma = std::mem::take(&mut members[ra]);
        let mb = std::mem::take(&mut members[rb]);
        let (ca, cb) = (min_class[ra], min_class[rb]);
        let merged_class = if sa < k && sb < k {
            if sa + sb >= k {
                let c = classes.len();
                let mut cls: Vec<usize> = ma.iter().chain(mb.iter()).copied().collect();
                cls.sort_unstable();
                for &v in &cls {
                    class_of[v] = c;
                }
                classes.push(cls);
                c
            } else {
                usize::MAX
            }
        } else if sa < k {
            for &v in &ma {
                class_of[v] = cb;
                classes[cb].push(v);
            }
            cb
        } else if sb < k {
            for &v in &mb {
                class_of[v] = ca;
                classes[ca].push(v);
            }
            ca
        } else {
            ca.min(cb)
        };
        dsu.union(ra, rb);
        let r = dsu.find(ra);
        ma.extend(mb);
        members[r] = ma;
        min_class[r] = merged_class;
    }
    if dsu.components() > 1 {
        let r0 = dsu.find(0);
        let v = (1..m).find(|&v| dsu.find(v) != r0).expect("more than one component");
        return Err(Error::Disconnected { u: 0, v });
    }
    for c in classes.iter_mut() {
        c.sort_unstable();
    }

    let mc = classes.len();
    let mut best = vec![f64::INFINITY; mc * mc];
    for e in graph.edges() {
        let (a, b) = (class_of[e.u], class_of[e.v]);
        if a != b {
            let (a, b) = (a.min(b), a.max(b));
            let slot = &mut best[a * mc + b];
            if e.w < *slot {
                *slot = e.w;
            }
        }
    }
    let mut reduced = WeightedGraph::new(mc);
    for a in 0..mc {
        for b in a + 1..mc {
            let w = best[a * mc + b];
            if w.is_finite() {
                reduced.add_edge(a, b, w)?;
            }
        }
    }
    let (reduced_tree, _) = kruskal(&reduced)?;
    let reduced_cost = reduced_tree.cost(1.0);
    Ok(GkReduction {
        k,
        classes,
        class_of,
        reduced,
        reduced_tree,
        reduced_cost,
    })
}
