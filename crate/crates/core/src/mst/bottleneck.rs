use super::dsu::DisjointSets;
use crate::error::Result;
use crate::geometry::{BipartiteInstance, SpatialGrid};

/// Smallest `z` for which the bipartite threshold graph (cross-color edges
/// of length at most `z`) is connected.
///
/// The search brackets the answer by doubling from the largest
/// nearest-opposite-color distance, then binary searches the sorted cross
/// distances inside the bracket. The value is bit-identical to the longest
/// edge of the bipartite MST.
pub fn bottleneck_threshold(instance: &BipartiteInstance) -> Result<f64> {
    let metric = instance.metric;
    let (nr, nb) = (instance.n_red(), instance.n_blue());
    let red_grid = SpatialGrid::build(&instance.red, metric, 2.0);
    let blue_grid = SpatialGrid::build(&instance.blue, metric, 2.0);

    let mut lo = 0.0f64;
    for i in 0..nr {
        let (d2, _) = blue_grid
            .nearest(instance.red.point(i), f64::INFINITY, |_| true)
            .expect("blue set is nonempty");
        lo = lo.max(d2);
    }
    for j in 0..nb {
        let (d2, _) = red_grid
            .nearest(instance.blue.point(j), f64::INFINITY, |_| true)
            .expect("red set is nonempty");
        lo = lo.max(d2);
    }

    let connected = |t: f64| -> bool {
        let mut dsu = DisjointSets::new(nr + nb);
        for i in 0..nr {
            blue_grid.within(instance.red.point(i), t, true, |j, _| {
                dsu.union(i, nr + j);
            });
        }
        dsu.components() == 1
    };

    if connected(lo) {
        return Ok(lo.sqrt());
    }
    // every cross pair is within this squared distance
    let cap = match metric {
        crate::geometry::MetricKind::UnitCube => instance.dim() as f64,
        crate::geometry::MetricKind::FlatTorus => instance.dim() as f64 / 4.0,
    };
    let mut below = lo;
    let mut hi = if lo > 0.0 { (2.0 * lo).min(cap) } else { f64::MIN_POSITIVE };
    while !connected(hi) {
        below = hi;
        hi = if hi >= cap { f64::INFINITY } else { (2.0 * hi).min(cap) };
    }

    let mut cand: Vec<f64> = Vec::new();
    for i in 0..nr {
        blue_grid.within(instance.red.point(i), hi, true, |_, d2| {
            if d2 > below {
                cand.push(d2);
            }
        });
    }
    cand.sort_unstable_by(f64::total_cmp);
    cand.dedup();
    // connected(cand[last]) holds since the threshold graph at hi is connected
    let (mut a, mut b) = (0usize, cand.len() - 1);
    while a < b {
        let mid = (a + b) / 2;
        if connected(cand[mid]) {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    Ok(cand[a].sqrt())
}
