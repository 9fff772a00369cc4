//! Deliberately wrong spanning trees, used to exercise the failure paths of
//! the checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LemmaId;
use crate::error::{Error, Result};
use crate::geometry::BipartiteInstance;
use crate::mst::{DisjointSets, SpanningTree, TreeEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corruption {
    /// See [`long_edge_swap`].
    LongEdgeSwap,
    /// See [`drop_nearest`], applied to vertex 0.
    DropNearest,
    /// See [`star_tree`].
    Star,
}

impl Corruption {
    pub const ALL: [Corruption; 3] = [Corruption::LongEdgeSwap, Corruption::DropNearest, Corruption::Star];

    pub fn apply(self, instance: &BipartiteInstance, tree: &SpanningTree) -> Result<SpanningTree> {
        match self {
            Corruption::LongEdgeSwap => long_edge_swap(instance, tree),
            Corruption::DropNearest => drop_nearest(instance, tree, 0),
            Corruption::Star => star_tree(instance),
        }
    }

    /// Checks this corruption is designed to break on generic instances.
    pub fn targets(self) -> &'static [LemmaId] {
        match self {
            Corruption::LongEdgeSwap => &[
                LemmaId::CutProperty,
                LemmaId::EmptyCone,
                LemmaId::PInvariance,
                LemmaId::Bottleneck,
            ],
            Corruption::DropNearest => &[LemmaId::CutProperty, LemmaId::PInvariance],
            Corruption::Star => &[LemmaId::MonoToBi, LemmaId::TorusCubeTransfer],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Corruption::LongEdgeSwap => "long_edge_swap",
            Corruption::DropNearest => "drop_nearest",
            Corruption::Star => "star",
        }
    }
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Corruption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "long_edge_swap" | "swap" => Ok(Corruption::LongEdgeSwap),
            "drop_nearest" | "drop" => Ok(Corruption::DropNearest),
            "star" => Ok(Corruption::Star),
            other => Err(Error::InvalidParameter(format!("unknown corruption '{other}'"))),
        }
    }
}

fn edge(instance: &BipartiteInstance, a: usize, b: usize) -> TreeEdge {
    TreeEdge {
        u: a.min(b),
        v: a.max(b),
        length: instance.vertex_dist(a, b),
    }
}

/// Replaces tree edge `remove` by the cross-color edge `add`.
pub fn swap_edge(
    instance: &BipartiteInstance,
    tree: &SpanningTree,
    remove: (usize, usize),
    add: (usize, usize),
) -> Result<SpanningTree> {
    if !tree.contains_edge(remove.0, remove.1) {
        return Err(Error::Precondition(format!("edge {remove:?} is not in the tree")));
    }
    if instance.is_red(add.0) == instance.is_red(add.1) {
        return Err(Error::Precondition(format!("edge {add:?} joins one color")));
    }
    let (ru, rv) = (remove.0.min(remove.1), remove.0.max(remove.1));
    let mut edges: Vec<TreeEdge> = tree
        .edges()
        .iter()
        .copied()
        .filter(|e| (e.u, e.v) != (ru, rv))
        .collect();
    edges.push(edge(instance, add.0, add.1));
    SpanningTree::new(tree.vertex_count(), edges)
}

/// Removes `remove` and reconnects the two sides by the longest cross-color
/// pair between them.
fn reconnect_longest(
    instance: &BipartiteInstance,
    tree: &SpanningTree,
    remove: (usize, usize),
) -> Result<SpanningTree> {
    let (ru, rv) = (remove.0.min(remove.1), remove.0.max(remove.1));
    let mut dsu = DisjointSets::new(tree.vertex_count());
    for e in tree.edges() {
        if (e.u, e.v) != (ru, rv) {
            dsu.union(e.u, e.v);
        }
    }
    let nr = instance.n_red();
    let mut best: Option<(f64, usize, usize)> = None;
    for r in 0..nr {
        for b in nr..instance.len() {
            if (r, b) == (ru, rv) || dsu.find(r) == dsu.find(b) {
                continue;
            }
            let d = instance.vertex_dist(r, b);
            if best.is_none_or(|(bd, _, _)| d > bd) {
                best = Some((d, r, b));
            }
        }
    }
    let (_, r, b) = best.ok_or_else(|| {
        Error::Precondition(format!("no other edge reconnects the tree after removing {remove:?}"))
    })?;
    swap_edge(instance, tree, remove, (r, b))
}

/// Swaps the shortest tree edge for the longest cross-color edge that
/// reconnects the tree.
pub fn long_edge_swap(instance: &BipartiteInstance, tree: &SpanningTree) -> Result<SpanningTree> {
    let e = tree
        .edges()
        .iter()
        .copied()
        .fold(None::<TreeEdge>, |m, e| match m {
            Some(m) if m.length <= e.length => Some(m),
            _ => Some(e),
        })
        .ok_or_else(|| Error::Precondition("tree has no edges".into()))?;
    reconnect_longest(instance, tree, (e.u, e.v))
}

/// Removes the edge from `vertex` to its nearest opposite-color point and
/// reconnects by the longest available edge.
pub fn drop_nearest(instance: &BipartiteInstance, tree: &SpanningTree, vertex: usize) -> Result<SpanningTree> {
    if vertex >= instance.len() {
        return Err(Error::InvalidParameter(format!("vertex {vertex} out of range")));
    }
    let nr = instance.n_red();
    let range = if instance.is_red(vertex) { nr..instance.len() } else { 0..nr };
    let nearest = range
        .map(|u| (instance.vertex_dist(vertex, u), u))
        .fold(None::<(f64, usize)>, |m, c| match m {
            Some(m) if m.0 <= c.0 => Some(m),
            _ => Some(c),
        })
        .expect("opposite color is nonempty")
        .1;
    reconnect_longest(instance, tree, (vertex, nearest))
}

/// Red vertex 0 joined to every blue vertex, blue vertex 0 joined to every
/// other red vertex.
pub fn star_tree(instance: &BipartiteInstance) -> Result<SpanningTree> {
    let nr = instance.n_red();
    let mut edges: Vec<TreeEdge> = (nr..instance.len()).map(|b| edge(instance, 0, b)).collect();
    edges.extend((1..nr).map(|r| edge(instance, r, nr)));
    SpanningTree::new(instance.len(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{
        check_bottleneck, check_cut_property, check_empty_cone, check_mono_to_bi_bound_for_tree,
        check_p_invariance, check_torus_cube_transfer_for_tree, Status,
    };
    use crate::geometry::{sample_uniform, MetricKind};
    use crate::mst::{bipartite_mst, bottleneck_threshold, Solver};

    #[test]
    fn every_corruption_breaks_its_targets() {
        for seed in 0..5 {
            let inst = sample_uniform(100, 100, 2, MetricKind::UnitCube, seed).unwrap();
            let t = bipartite_mst(&inst, Solver::GridBoruvka).unwrap();
            let delta = 2.0 * bottleneck_threshold(&inst).unwrap();
            for c in Corruption::ALL {
                let bad = c.apply(&inst, &t).unwrap();
                assert_ne!(bad.edge_set(), t.edge_set());
                for &lemma in c.targets() {
                    let r = match lemma {
                        LemmaId::CutProperty => check_cut_property(&inst, &bad),
                        LemmaId::EmptyCone => check_empty_cone(&inst, &bad),
                        LemmaId::PInvariance => check_p_invariance(&inst, &bad),
                        LemmaId::Bottleneck => check_bottleneck(&inst, &bad),
                        LemmaId::MonoToBi => check_mono_to_bi_bound_for_tree(&inst, &bad, 1.0),
                        LemmaId::TorusCubeTransfer => {
                            check_torus_cube_transfer_for_tree(&inst, &bad, delta, 1.0)
                        }
                        _ => unreachable!(),
                    }
                    .unwrap();
                    assert_eq!(r.status, Status::Fail, "{c} vs {lemma} seed {seed}");
                    assert!(r.witness.is_some());
                }
            }
        }
    }

    #[test]
    fn swap_rejects_cycles_and_bad_edges() {
        let inst = BipartiteInstance::on_line(&[0.0, 0.6], &[0.25]).unwrap();
        let t = bipartite_mst(&inst, Solver::Brute).unwrap();
        assert!(swap_edge(&inst, &t, (0, 1), (0, 2)).is_err());
        assert!(swap_edge(&inst, &t, (0, 2), (0, 1)).is_err());
        assert!(swap_edge(&inst, &t, (0, 2), (1, 2)).is_err());
    }
}
