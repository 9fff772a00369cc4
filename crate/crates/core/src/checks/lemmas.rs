use rand::Rng;

use super::{LemmaId, LemmaReport, Witness};
use crate::error::{Error, Result};
use crate::geometry::{hausdorff, BipartiteInstance, MetricKind, PointSet, SpatialGrid};
use crate::mst::{bipartite_mst, bottleneck_threshold, euclidean_mst, DisjointSets, Solver, SpanningTree, BRUTE_EDGE_LIMIT};
use crate::rng::rng_from_seed;

/// Relative tolerance for inequalities whose two sides come from separate
/// floating-point summations.
const SUM_TOL: f64 = 1e-9;

fn tol(scale: f64) -> f64 {
    SUM_TOL * scale.abs().max(1.0)
}

/// Checks that `tree` is a spanning tree of the complete bipartite graph of
/// `instance` with lengths under the instance metric.
pub fn validate_tree(instance: &BipartiteInstance, tree: &SpanningTree) -> Result<()> {
    if tree.vertex_count() != instance.len() {
        return Err(Error::TreeMismatch(format!(
            "tree has {} vertices, instance has {}",
            tree.vertex_count(),
            instance.len()
        )));
    }
    for e in tree.edges() {
        if instance.is_red(e.u) == instance.is_red(e.v) {
            return Err(Error::TreeMismatch(format!("edge ({}, {}) joins one color", e.u, e.v)));
        }
        let d = instance.vertex_dist(e.u, e.v);
        if (d - e.length).abs() > 1e-12 * d.max(1.0) {
            return Err(Error::TreeMismatch(format!(
                "edge ({}, {}) has length {} but the points are {} apart",
                e.u, e.v, e.length, d
            )));
        }
    }
    Ok(())
}

struct ColorGrids {
    red: SpatialGrid,
    blue: SpatialGrid,
}

impl ColorGrids {
    fn new(instance: &BipartiteInstance) -> Self {
        ColorGrids {
            red: SpatialGrid::build(&instance.red, instance.metric, 2.0),
            blue: SpatialGrid::build(&instance.blue, instance.metric, 2.0),
        }
    }

    /// Grid of the color opposite to `v` and the global offset of its points.
    fn opposite(&self, instance: &BipartiteInstance, v: usize) -> (&SpatialGrid, usize) {
        if instance.is_red(v) {
            (&self.blue, instance.n_red())
        } else {
            (&self.red, 0)
        }
    }
}

/// Every vertex whose shortest incident edge is unique must be joined to
/// its nearest opposite-color point.
pub fn check_cut_property(instance: &BipartiteInstance, tree: &SpanningTree) -> Result<LemmaReport> {
    validate_tree(instance, tree)?;
    let grids = ColorGrids::new(instance);
    let mut slack = f64::INFINITY;
    let mut checked = 0usize;
    for v in 0..instance.len() {
        let (grid, off) = grids.opposite(instance, v);
        let near = grid.k_nearest(instance.vertex(v), 2, |_| true);
        let (d0, j0) = near[0];
        let gap = match near.get(1) {
            Some(&(d1, _)) if d1 == d0 => continue,
            Some(&(d1, _)) => d1.sqrt() - d0.sqrt(),
            None => f64::INFINITY,
        };
        checked += 1;
        let u = j0 + off;
        if !tree.contains_edge(v, u) {
            return Ok(LemmaReport::fail(
                LemmaId::CutProperty,
                instance.descriptor(),
                -d0.sqrt(),
                Witness {
                    description: format!("vertex {v} is not joined to its unique nearest vertex {u}"),
                    vertices: vec![v, u],
                    value: d0.sqrt(),
                },
            ));
        }
        slack = slack.min(gap);
    }
    if checked == 0 {
        return Ok(LemmaReport::vacuous(LemmaId::CutProperty, instance.descriptor()));
    }
    Ok(LemmaReport::pass(LemmaId::CutProperty, instance.descriptor(), slack))
}

/// For every tree edge `{r, b}` longer than the Hausdorff distance `H`, no
/// red point other than `r` lies in the lens `dist(x, r) < |r - b| - H`,
/// `dist(x, b) < |r - b|`; likewise for blue points with colors swapped.
///
/// `slack` is the smallest clearance of a candidate point from the lens.
pub fn check_empty_cone(instance: &BipartiteInstance, tree: &SpanningTree) -> Result<LemmaReport> {
    validate_tree(instance, tree)?;
    let metric = instance.metric;
    let h = hausdorff(&instance.red, &instance.blue, metric)?;
    let grids = ColorGrids::new(instance);
    let nr = instance.n_red();
    let mut any = false;
    let mut slack = f64::INFINITY;
    for e in tree.edges() {
        let delta = e.length;
        if !(delta > h) {
            continue;
        }
        any = true;
        let radius = delta - h;
        // (pivot, far end, grid holding the pivot's color, offset)
        let sides = [(e.u, e.v, &grids.red, 0usize), (e.v, e.u, &grids.blue, nr)];
        for (pivot, far, grid, off) in sides {
            let pc = instance.vertex(pivot);
            let fc = instance.vertex(far);
            let mut hit: Option<(usize, f64)> = None;
            let r_sq = radius * radius * (1.0 + 1e-12);
            grid.within(pc, r_sq, true, |j, _| {
                let x = j + off;
                if x == pivot || hit.is_some() {
                    return;
                }
                let a = metric.dist_sq(instance.vertex(x), pc).sqrt();
                let b = metric.dist_sq(instance.vertex(x), fc).sqrt();
                let clearance = (a - radius).max(b - delta);
                if a < radius && b < delta {
                    hit = Some((x, clearance));
                } else {
                    slack = slack.min(clearance);
                }
            });
            if let Some((x, clearance)) = hit {
                return Ok(LemmaReport::fail(
                    LemmaId::EmptyCone,
                    instance.descriptor(),
                    clearance,
                    Witness {
                        description: format!(
                            "vertex {x} lies in the lens of edge ({}, {}) with length {delta}",
                            e.u, e.v
                        ),
                        vertices: vec![e.u, e.v, x],
                        value: delta,
                    },
                ));
            }
        }
    }
    if !any {
        return Ok(LemmaReport::vacuous(LemmaId::EmptyCone, instance.descriptor()));
    }
    Ok(LemmaReport::pass(LemmaId::EmptyCone, instance.descriptor(), slack))
}

/// Edge set of the bipartite MST for weights `dist^p`, by Kruskal over all
/// cross pairs.
fn brute_edge_set(instance: &BipartiteInstance, p: f64) -> Result<std::collections::BTreeSet<(usize, usize)>> {
    let (nr, nb) = (instance.n_red(), instance.n_blue());
    if nr.saturating_mul(nb) > BRUTE_EDGE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "{} cross edges exceed the limit {BRUTE_EDGE_LIMIT}",
            nr * nb
        )));
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(nr * nb);
    for i in 0..nr {
        for j in 0..nb {
            let d = instance.vertex_dist(i, nr + j);
            pairs.push((d.powf(p), i, nr + j));
        }
    }
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut dsu = DisjointSets::new(nr + nb);
    let mut set = std::collections::BTreeSet::new();
    for (_, u, v) in pairs {
        if dsu.union(u, v).is_some() {
            set.insert((u, v));
        }
    }
    Ok(set)
}

/// The MST edge set computed by Kruskal under weights `dist^p` for
/// `p` in {0.5, 1, 2} must equal the edge set of `tree`.
pub fn check_p_invariance(instance: &BipartiteInstance, tree: &SpanningTree) -> Result<LemmaReport> {
    validate_tree(instance, tree)?;
    let mine = tree.edge_set();
    for p in [0.5, 1.0, 2.0] {
        let other = brute_edge_set(instance, p)?;
        if other != mine {
            let diff: Vec<(usize, usize)> = mine.symmetric_difference(&other).copied().collect();
            let (u, v) = diff[0];
            return Ok(LemmaReport::fail(
                LemmaId::PInvariance,
                instance.descriptor(),
                -(diff.len() as f64),
                Witness {
                    description: format!(
                        "edge ({u}, {v}) differs from the MST for exponent {p}; {} edges differ",
                        diff.len()
                    ),
                    vertices: vec![u, v],
                    value: p,
                },
            ));
        }
    }
    Ok(LemmaReport::pass(LemmaId::PInvariance, instance.descriptor(), 0.0))
}

/// The longest tree edge must equal the connectivity threshold of the
/// bipartite threshold graph.
pub fn check_bottleneck(instance: &BipartiteInstance, tree: &SpanningTree) -> Result<LemmaReport> {
    validate_tree(instance, tree)?;
    let threshold = bottleneck_threshold(instance)?;
    let b = tree.bottleneck();
    if b == threshold {
        return Ok(LemmaReport::pass(LemmaId::Bottleneck, instance.descriptor(), 0.0));
    }
    let e = tree
        .edges()
        .iter()
        .copied()
        .fold(None::<crate::mst::TreeEdge>, |m, e| match m {
            Some(m) if m.length >= e.length => Some(m),
            _ => Some(e),
        })
        .expect("tree has an edge");
    Ok(LemmaReport::fail(
        LemmaId::Bottleneck,
        instance.descriptor(),
        threshold - b,
        Witness {
            description: format!("longest edge {b} differs from the connectivity threshold {threshold}"),
            vertices: vec![e.u, e.v],
            value: b,
        },
    ))
}

/// Constant of the mono-to-bipartite bound, `max(1, 2^{p-1})`.
pub fn mono_to_bi_constant(p: f64) -> f64 {
    1f64.max(2f64.powf(p - 1.0))
}

fn nearest_opposite_sum(instance: &BipartiteInstance, p: f64) -> f64 {
    let grids = ColorGrids::new(instance);
    (0..instance.len())
        .map(|v| {
            let (grid, _) = grids.opposite(instance, v);
            let (d2, _) = grid
                .nearest(instance.vertex(v), f64::INFINITY, |_| true)
                .expect("both colors are nonempty");
            d2.sqrt().powf(p)
        })
        .sum()
}

/// `C^p(R, B) <= C (C^p(R) + sum_r dist(B, r)^p + sum_b dist(R, b)^p)` with
/// `C = max(1, 2^{p-1})`, the bipartite cost taken from `tree`.
pub fn check_mono_to_bi_bound_for_tree(
    instance: &BipartiteInstance,
    tree: &SpanningTree,
    p: f64,
) -> Result<LemmaReport> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent must be positive, got {p}")));
    }
    validate_tree(instance, tree)?;
    let lhs = tree.cost(p);
    let mono = euclidean_mst(&instance.red, instance.metric)?.cost(p);
    let rhs = mono_to_bi_constant(p) * (mono + nearest_opposite_sum(instance, p));
    let slack = rhs - lhs;
    if slack >= -tol(rhs) {
        Ok(LemmaReport::pass(LemmaId::MonoToBi, instance.descriptor(), slack))
    } else {
        Ok(LemmaReport::fail(
            LemmaId::MonoToBi,
            instance.descriptor(),
            slack,
            Witness {
                description: format!("bipartite cost {lhs} exceeds the bound {rhs}"),
                vertices: Vec::new(),
                value: lhs,
            },
        ))
    }
}

/// [`check_mono_to_bi_bound_for_tree`] on the solved bipartite MST.
pub fn check_mono_to_bi_bound(instance: &BipartiteInstance, p: f64) -> Result<LemmaReport> {
    let tree = bipartite_mst(instance, Solver::GridBoruvka)?;
    check_mono_to_bi_bound_for_tree(instance, &tree, p)
}

fn outside_core(points: &PointSet, delta: f64) -> PointSet {
    let keep: Vec<usize> = (0..points.len())
        .filter(|&i| points.point(i).iter().any(|&c| c < delta || c > 1.0 - delta))
        .collect();
    points.select(&keep)
}

/// `C^p(R, B) <= C^p(R, B | torus) + C^p(R_δ, B_δ)` where the shells
/// `R_δ, B_δ` are the points outside `[δ, 1-δ]^d`, for a cube-metric tree.
///
/// Requires `0 < δ < 1/2` and the cube bottleneck at most `δ`. With an empty
/// shell the last term is zero; the report is vacuous if the torus tree then
/// uses a wrapping edge.
pub fn check_torus_cube_transfer_for_tree(
    instance: &BipartiteInstance,
    tree: &SpanningTree,
    delta: f64,
    p: f64,
) -> Result<LemmaReport> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("shell width must lie in (0, 1/2), got {delta}")));
    }
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent must be positive, got {p}")));
    }
    let cube = instance.with_metric(MetricKind::UnitCube);
    validate_tree(&cube, tree)?;
    let b = bottleneck_threshold(&cube)?;
    if b > delta {
        return Err(Error::Precondition(format!("cube bottleneck {b} exceeds shell width {delta}")));
    }
    let torus = instance.with_metric(MetricKind::FlatTorus);
    let torus_tree = bipartite_mst(&torus, Solver::GridBoruvka)?;
    let rs = outside_core(&instance.red, delta);
    let bs = outside_core(&instance.blue, delta);
    let shell = if rs.is_empty() || bs.is_empty() {
        let wraps = torus_tree
            .edges()
            .iter()
            .any(|e| e.length < cube.vertex_dist(e.u, e.v));
        if wraps {
            return Ok(LemmaReport::vacuous(LemmaId::TorusCubeTransfer, cube.descriptor()));
        }
        0.0
    } else {
        let shell_inst = BipartiteInstance::new(rs, bs, MetricKind::UnitCube, instance.seed)?;
        bipartite_mst(&shell_inst, Solver::GridBoruvka)?.cost(p)
    };
    let lhs = tree.cost(p);
    let rhs = torus_tree.cost(p) + shell;
    let slack = rhs - lhs;
    if slack >= -tol(rhs) {
        Ok(LemmaReport::pass(LemmaId::TorusCubeTransfer, cube.descriptor(), slack))
    } else {
        Ok(LemmaReport::fail(
            LemmaId::TorusCubeTransfer,
            cube.descriptor(),
            slack,
            Witness {
                description: format!("cube cost {lhs} exceeds torus cost plus shell cost {rhs}"),
                vertices: Vec::new(),
                value: lhs,
            },
        ))
    }
}

/// [`check_torus_cube_transfer_for_tree`] on the solved cube MST.
pub fn check_torus_cube_transfer(instance: &BipartiteInstance, delta: f64, p: f64) -> Result<LemmaReport> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("shell width must lie in (0, 1/2), got {delta}")));
    }
    let cube = instance.with_metric(MetricKind::UnitCube);
    let tree = bipartite_mst(&cube, Solver::GridBoruvka)?;
    check_torus_cube_transfer_for_tree(instance, &tree, delta, p)
}

/// Replaces global vertex `index` by `point`, re-solves, and checks
/// `|f - f'| <= d^{p/2} (Δ(T) + Δ(T'))` for `p <= 1`.
pub fn check_bounded_difference_at(
    instance: &BipartiteInstance,
    p: f64,
    index: usize,
    point: &[f64],
) -> Result<LemmaReport> {
    if p > 1.0 {
        return Err(Error::UnsupportedRegime(format!(
            "resampling bound needs p <= 1, got {p}"
        )));
    }
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent must be positive, got {p}")));
    }
    if index >= instance.len() {
        return Err(Error::InvalidParameter(format!("vertex {index} out of range")));
    }
    let t0 = bipartite_mst(instance, Solver::GridBoruvka)?;
    let mut moved = instance.clone();
    let nr = instance.n_red();
    if index < nr {
        moved.red.set_point(index, point);
    } else {
        moved.blue.set_point(index - nr, point);
    }
    let moved = BipartiteInstance::new(moved.red, moved.blue, moved.metric, moved.seed)?;
    let t1 = bipartite_mst(&moved, Solver::GridBoruvka)?;
    let diff = (t0.cost(p) - t1.cost(p)).abs();
    let bound = (instance.dim() as f64).powf(p / 2.0)
        * (t0.max_degree() as f64 + t1.max_degree() as f64);
    let slack = bound - diff;
    if slack >= -tol(bound) {
        Ok(LemmaReport::pass(LemmaId::BoundedDifference, instance.descriptor(), slack))
    } else {
        Ok(LemmaReport::fail(
            LemmaId::BoundedDifference,
            instance.descriptor(),
            slack,
            Witness {
                description: format!("moving vertex {index} changed the cost by {diff} > {bound}"),
                vertices: vec![index],
                value: diff,
            },
        ))
    }
}

/// [`check_bounded_difference_at`] with a uniformly chosen vertex moved to a
/// uniform point, both drawn from `seed`.
pub fn check_bounded_difference(instance: &BipartiteInstance, p: f64, seed: u64) -> Result<LemmaReport> {
    let mut rng = rng_from_seed(seed);
    let index = rng.random_range(0..instance.len());
    let point: Vec<f64> = (0..instance.dim()).map(|_| rng.random::<f64>()).collect();
    check_bounded_difference_at(instance, p, index, &point)
}

/// Runs every tree check applicable to `tree` (an MST of `instance` under its
/// own metric): cut property, empty cone, p-invariance, bottleneck,
/// mono-to-bipartite bound, and, for cube instances, the torus transfer with
/// shell width twice the bottleneck (vacuous when that is not below 1/2).
pub fn run_all(instance: &BipartiteInstance, tree: &SpanningTree, p: f64) -> Result<Vec<LemmaReport>> {
    let mut out = vec![
        check_cut_property(instance, tree)?,
        check_empty_cone(instance, tree)?,
        check_p_invariance(instance, tree)?,
        check_bottleneck(instance, tree)?,
        check_mono_to_bi_bound_for_tree(instance, tree, p)?,
    ];
    if instance.metric == MetricKind::UnitCube {
        let delta = 2.0 * bottleneck_threshold(instance)?;
        if delta < 0.5 {
            out.push(check_torus_cube_transfer_for_tree(instance, tree, delta, p)?);
        } else {
            out.push(LemmaReport::vacuous(LemmaId::TorusCubeTransfer, instance.descriptor()));
        }
    }
    Ok(out)
}
