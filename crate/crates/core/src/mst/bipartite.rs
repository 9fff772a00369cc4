use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dsu::DisjointSets;
use super::tree::{SpanningTree, TreeEdge};
use crate::error::{Error, Result};
use crate::geometry::{BipartiteInstance, MetricKind, PointSet, SpatialGrid};

/// Largest number of cross-color edges the brute-force solver materializes.
pub const BRUTE_EDGE_LIMIT: usize = 4_000_000;

const POINTS_PER_CELL: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    /// Kruskal over all `n_R * n_B` edges.
    Brute,
    /// Borůvka rounds with nearest-outside-component queries on a grid.
    GridBoruvka,
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "brute" => Ok(Solver::Brute),
            "grid" | "grid_boruvka" | "grid-boruvka" | "boruvka" => Ok(Solver::GridBoruvka),
            other => Err(Error::InvalidParameter(format!("unknown solver '{other}'"))),
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Brute => "brute",
            Solver::GridBoruvka => "grid_boruvka",
        })
    }
}

/// Exact MST of the complete bipartite graph on the instance, with edge
/// lengths under the instance metric.
///
/// Vertices use the instance's global numbering. The tree does not depend on
/// the cost exponent. Equal lengths are ordered by `(red vertex, blue
/// vertex)`, so both solvers return the same tree.
pub fn bipartite_mst(instance: &BipartiteInstance, solver: Solver) -> Result<SpanningTree> {
    match solver {
        Solver::Brute => brute(instance),
        Solver::GridBoruvka => boruvka(&instance.all_points(), Some(instance.n_red()), instance.metric),
    }
}

/// Euclidean (or toroidal) MST of a single point set.
pub fn euclidean_mst(points: &PointSet, metric: MetricKind) -> Result<SpanningTree> {
    if points.is_empty() {
        return Err(Error::EmptySet("point set"));
    }
    boruvka(points, None, metric)
}

fn brute(instance: &BipartiteInstance) -> Result<SpanningTree> {
    let (nr, nb) = (instance.n_red(), instance.n_blue());
    let total = nr.saturating_mul(nb);
    if total > BRUTE_EDGE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "brute solver needs {total} edges, limit is {BRUTE_EDGE_LIMIT}"
        )));
    }
    let metric = instance.metric;
    let mut edges: Vec<(f64, u32, u32)> = Vec::with_capacity(total);
    for i in 0..nr {
        let r = instance.red.point(i);
        for j in 0..nb {
            edges.push((metric.dist_sq(r, instance.blue.point(j)), i as u32, j as u32));
        }
    }
    edges.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let n = nr + nb;
    let mut dsu = DisjointSets::new(n);
    let mut tree = Vec::with_capacity(n - 1);
    for (d2, i, j) in edges {
        let (u, v) = (i as usize, nr + j as usize);
        if dsu.union(u, v).is_some() {
            tree.push(TreeEdge { u, v, length: d2.sqrt() });
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    SpanningTree::new(n, tree)
}

/// Borůvka over `points`. With `split = Some(s)`, vertices below `s` are red
/// and only red-blue edges exist; with `None` all pairs are edges.
///
/// Edges are compared by `(squared length, lower vertex, upper vertex)`, a
/// strict total order, so every selected edge belongs to the unique MST under
/// that order.
fn boruvka(points: &PointSet, split: Option<usize>, metric: MetricKind) -> Result<SpanningTree> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptySet("point set"));
    }
    let dim = points.dim();
    if dim == 1 {
        return line_mst(points, split, metric);
    }
    let (grids, offsets): (Vec<SpatialGrid>, Vec<usize>) = match split {
        Some(s) => {
            if s == 0 || s == n {
                return Err(Error::InvalidInstance("both color classes must be nonempty".into()));
            }
            let red = PointSet::from_flat(dim, points.as_flat()[..s * dim].to_vec())?;
            let blue = PointSet::from_flat(dim, points.as_flat()[s * dim..].to_vec())?;
            (
                vec![
                    SpatialGrid::build(&red, metric, POINTS_PER_CELL),
                    SpatialGrid::build(&blue, metric, POINTS_PER_CELL),
                ],
                vec![0, s],
            )
        }
        None => (vec![SpatialGrid::build(points, metric, POINTS_PER_CELL)], vec![0]),
    };
    // grid searched from vertex i
    let target = |i: usize| -> usize {
        match split {
            Some(s) if i < s => 1,
            Some(_) => 0,
            None => 0,
        }
    };

    let mut dsu = DisjointSets::new(n);
    let mut lower = vec![0.0f64; n];
    let mut cache: Vec<Option<(f64, usize)>> = vec![None; n];
    let mut tree: Vec<TreeEdge> = Vec::with_capacity(n.saturating_sub(1));
    let mut root = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    let less = |a: (f64, usize, usize), b: (f64, usize, usize)| {
        a.0 < b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2))
    };

    while dsu.components() > 1 {
        for (i, r) in root.iter_mut().enumerate() {
            *r = dsu.find(i);
        }
        order.sort_unstable_by(|&a, &b| {
            root[a].cmp(&root[b]).then(lower[a].total_cmp(&lower[b])).then(a.cmp(&b))
        });
        let mut chosen: Vec<(f64, usize, usize)> = Vec::new();
        let mut start = 0;
        while start < n {
            let comp = root[order[start]];
            let mut end = start;
            while end < n && root[order[end]] == comp {
                end += 1;
            }
            let mut best: Option<(f64, usize, usize)> = None;
            for &i in &order[start..end] {
                if let Some(b) = best {
                    if lower[i] > b.0 {
                        break;
                    }
                }
                let hit = match cache[i] {
                    Some((d2, j)) if root[j] != comp => Some((d2, j)),
                    _ => {
                        let upper = best.map_or(f64::INFINITY, |b| b.0);
                        let t = target(i);
                        let off = offsets[t];
                        let res = grids[t]
                            .nearest(points.point(i), upper, |loc| root[loc + off] != comp)
                            .map(|(d2, loc)| (d2, loc + off));
                        match res {
                            Some(h) => {
                                cache[i] = Some(h);
                                lower[i] = h.0;
                            }
                            None => {
                                cache[i] = None;
                                if upper.is_finite() {
                                    lower[i] = lower[i].max(upper);
                                }
                            }
                        }
                        res
                    }
                };
                if let Some((d2, j)) = hit {
                    let cand = (d2, i.min(j), i.max(j));
                    if best.is_none_or(|b| less(cand, b)) {
                        best = Some(cand);
                    }
                }
            }
            match best {
                Some(b) => chosen.push(b),
                None => {
                    // only possible when no opposite-color point exists
                    return Err(Error::Disconnected { u: order[start], v: order[start] });
                }
            }
            start = end;
        }
        chosen.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        chosen.dedup_by(|a, b| a.1 == b.1 && a.2 == b.2);
        for (d2, u, v) in chosen {
            if dsu.union(u, v).is_some() {
                tree.push(TreeEdge { u, v, length: d2.sqrt() });
            }
        }
    }
    SpanningTree::new(n, tree)
}

/// Exact MST on the line or circle by Kruskal over a sparse candidate set.
///
/// If a red and a blue point both lie strictly inside the shorter arc of an
/// edge `{r, b}`, the path through them is strictly lighter, so `{r, b}` is
/// not in the MST. Hence every MST edge joins a point to an opposite-color
/// point at the same coordinate or in the nearest coordinate group holding
/// that color on either side.
fn line_mst(points: &PointSet, split: Option<usize>, metric: MetricKind) -> Result<SpanningTree> {
    let n = points.len();
    if let Some(s) = split {
        if s == 0 || s == n {
            return Err(Error::InvalidInstance("both color classes must be nonempty".into()));
        }
    }
    let color = |i: usize| split.map_or(0, |s| usize::from(i >= s));
    let opposite = |i: usize, j: usize| split.is_none() || color(i) != color(j);
    let x = |i: usize| points.point(i)[0];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| x(a).total_cmp(&x(b)).then(a.cmp(&b)));
    // groups of equal coordinate, in sorted order
    let mut groups: Vec<&[usize]> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && x(order[end]) == x(order[start]) {
            end += 1;
        }
        groups.push(&order[start..end]);
        start = end;
    }
    let g = groups.len();
    let colors = if split.is_some() { 2 } else { 1 };
    let has = |k: usize, c: usize| groups[k].iter().any(|&i| color(i) == c);
    let torus = metric == MetricKind::FlatTorus;
    // nearest group strictly left/right of each group holding each color
    let mut left = vec![[None::<usize>; 2]; g];
    let mut right = vec![[None::<usize>; 2]; g];
    for c in 0..colors {
        let mut last = None;
        let passes = if torus { 2 } else { 1 };
        for k in 0..passes * g {
            let kk = k % g;
            if k >= g || left[kk][c].is_none() {
                if let Some(l) = last {
                    if l != kk {
                        left[kk][c] = Some(l);
                    }
                }
            }
            if has(kk, c) {
                last = Some(kk);
            }
        }
        last = None;
        for k in (0..passes * g).rev() {
            let kk = k % g;
            if let Some(r) = last {
                if r != kk && right[kk][c].is_none() {
                    right[kk][c] = Some(r);
                }
            }
            if has(kk, c) {
                last = Some(kk);
            }
        }
    }
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    let mut add = |i: usize, j: usize| {
        if i != j && opposite(i, j) {
            let d2 = metric.dist_sq(points.point(i), points.point(j));
            edges.push((d2, i.min(j), i.max(j)));
        }
    };
    for k in 0..g {
        for &i in groups[k] {
            let want = if split.is_some() { 1 - color(i) } else { 0 };
            for nb in [Some(k), left[k][want], right[k][want]].into_iter().flatten() {
                for &j in groups[nb] {
                    add(i, j);
                }
            }
        }
    }
    edges.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    edges.dedup_by(|a, b| a.1 == b.1 && a.2 == b.2);
    let mut dsu = DisjointSets::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (d2, u, v) in edges {
        if dsu.union(u, v).is_some() {
            tree.push(TreeEdge { u, v, length: d2.sqrt() });
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    SpanningTree::new(n, tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_uniform;
    use proptest::prelude::*;

    #[test]
    fn three_points_on_a_line() {
        let inst = BipartiteInstance::on_line(&[0.0, 0.6], &[0.25]).unwrap();
        for s in [Solver::Brute, Solver::GridBoruvka] {
            let t = bipartite_mst(&inst, s).unwrap();
            assert_eq!(t.edge_set().into_iter().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
            assert!((t.cost(1.0) - 0.6).abs() < 1e-15);
            assert!((t.bottleneck() - 0.35).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn line_solver_matches_brute(
            red in proptest::collection::vec(0u8..12, 1..25),
            blue in proptest::collection::vec(0u8..12, 1..25),
            torus in any::<bool>(),
        ) {
            // coarse coordinates force coincident points and equal lengths
            let r: Vec<f64> = red.iter().map(|&v| v as f64 / 12.0).collect();
            let b: Vec<f64> = blue.iter().map(|&v| v as f64 / 12.0).collect();
            let metric = if torus { MetricKind::FlatTorus } else { MetricKind::UnitCube };
            let inst = BipartiteInstance::on_line(&r, &b).unwrap().with_metric(metric);
            let fast = bipartite_mst(&inst, Solver::GridBoruvka).unwrap();
            let slow = bipartite_mst(&inst, Solver::Brute).unwrap();
            prop_assert_eq!(fast.edge_set(), slow.edge_set());
            prop_assert_eq!(fast.cost(1.0), slow.cost(1.0));
        }
    }

    #[test]
    fn single_pair() {
        let inst = BipartiteInstance::on_line(&[0.2], &[0.7]).unwrap();
        let t = bipartite_mst(&inst, Solver::GridBoruvka).unwrap();
        assert_eq!(t.edges().len(), 1);
        assert!((t.cost(0.5) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn brute_respects_edge_limit() {
        let inst = sample_uniform(2001, 2000, 1, MetricKind::UnitCube, 1).unwrap();
        assert!(matches!(bipartite_mst(&inst, Solver::Brute), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn mono_mst_on_square_corners() {
        let pts = PointSet::from_rows(2, &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        let t = euclidean_mst(&pts, MetricKind::UnitCube).unwrap();
        assert!((t.cost(1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn ties_give_identical_trees() {
        // lattice points produce many equal distances
        let red: Vec<f64> = (0..20).map(|i| i as f64 / 20.0).collect();
        let blue: Vec<f64> = (0..20).map(|i| (i as f64 + 0.5) / 20.0).collect();
        let inst = BipartiteInstance::on_line(&red, &blue).unwrap();
        let a = bipartite_mst(&inst, Solver::Brute).unwrap();
        let b = bipartite_mst(&inst, Solver::GridBoruvka).unwrap();
        assert_eq!(a.edge_set(), b.edge_set());
    }

    fn mono_brute(points: &PointSet, metric: MetricKind) -> f64 {
        let n = points.len();
        let g = crate::mst::WeightedGraph::complete(n, |u, v| {
            metric.dist_sq(points.point(u), points.point(v)).sqrt()
        })
        .unwrap();
        crate::mst::kruskal(&g).unwrap().0.cost(1.0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn solvers_agree(
            seed in any::<u64>(),
            nr in 1usize..120,
            nb in 1usize..120,
            dim in 1usize..4,
            torus in any::<bool>(),
        ) {
            let metric = if torus { MetricKind::FlatTorus } else { MetricKind::UnitCube };
            let inst = sample_uniform(nr, nb, dim, metric, seed).unwrap();
            let a = bipartite_mst(&inst, Solver::Brute).unwrap();
            let b = bipartite_mst(&inst, Solver::GridBoruvka).unwrap();
            prop_assert!((a.cost(1.0) - b.cost(1.0)).abs() <= 1e-9);
            prop_assert_eq!(a.edge_set(), b.edge_set());
            for e in b.edges() {
                prop_assert!(inst.is_red(e.u) != inst.is_red(e.v));
            }
        }

        #[test]
        fn mono_matches_kruskal(seed in any::<u64>(), n in 1usize..80, dim in 1usize..4, torus in any::<bool>()) {
            let metric = if torus { MetricKind::FlatTorus } else { MetricKind::UnitCube };
            let pts = PointSet::uniform(n, dim, &mut crate::rng::rng_from_seed(seed));
            let t = euclidean_mst(&pts, metric).unwrap();
            prop_assert!((t.cost(1.0) - mono_brute(&pts, metric)).abs() <= 1e-9);
        }
    }
}
