//! Minimum spanning trees on weighted graphs and on colored point sets.

mod bipartite;
mod bottleneck;
mod dsu;
mod gk;
mod graph;
mod profile;
mod tree;

pub use bipartite::{bipartite_mst, euclidean_mst, Solver, BRUTE_EDGE_LIMIT};
pub use bottleneck::bottleneck_threshold;
pub use dsu::DisjointSets;
pub use gk::{gk_reduction, GkReduction};
pub use graph::{kruskal, GraphEdge, WeightedGraph};
pub use profile::{ck_integral, classify, component_integral, Jump, MergeEvent, MergeProfile};
pub use tree::{SpanningTree, TreeEdge};
