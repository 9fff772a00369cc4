use serde::{Deserialize, Serialize};

use super::{MetricKind, PointSet, SpatialGrid};
use crate::error::{Error, Result};

/// Largest number of dyadic cells an occupancy scan may allocate.
pub const MAX_OCCUPANCY_CELLS: usize = 1 << 26;

/// Below this size the statistics use a plain double loop.
const BRUTE_LIMIT: usize = 64;

fn directed_hausdorff_sq(from: &PointSet, to: &PointSet, metric: MetricKind) -> f64 {
    if from.len() * to.len() <= BRUTE_LIMIT * BRUTE_LIMIT {
        return from
            .iter()
            .map(|p| {
                to.iter()
                    .map(|q| metric.dist_sq(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
    }
    let grid = SpatialGrid::build(to, metric, 2.0);
    from.iter()
        .map(|p| grid.nearest(p, f64::INFINITY, |_| true).map_or(0.0, |x| x.0))
        .fold(0.0, f64::max)
}

/// Hausdorff distance `max(sup_r inf_b |r-b|, sup_b inf_r |r-b|)`.
pub fn hausdorff(red: &PointSet, blue: &PointSet, metric: MetricKind) -> Result<f64> {
    if red.is_empty() || blue.is_empty() {
        return Err(Error::EmptySet("hausdorff needs two nonempty sets"));
    }
    if red.dim() != blue.dim() {
        return Err(Error::DimensionMismatch {
            expected: red.dim(),
            found: blue.dim(),
        });
    }
    let a = directed_hausdorff_sq(red, blue, metric);
    let b = directed_hausdorff_sq(blue, red, metric);
    Ok(a.max(b).sqrt())
}

/// `max_i min_{j != i} |x_i - x_j|`: the largest nearest-neighbor distance.
pub fn nn_max(points: &PointSet, metric: MetricKind) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: n });
    }
    let worst = if n <= BRUTE_LIMIT {
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| metric.dist_sq(points.point(i), points.point(j)))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    } else {
        let grid = SpatialGrid::build(points, metric, 2.0);
        (0..n)
            .map(|i| {
                grid.nearest(points.point(i), f64::INFINITY, |j| j != i)
                    .map_or(0.0, |x| x.0)
            })
            .fold(0.0, f64::max)
    };
    Ok(worst.sqrt())
}

/// Point counts of the `2^(k d)` half-open dyadic cells of level `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupancyScan {
    pub level: u32,
    /// Row-major over cell multi-indices, first axis fastest.
    pub counts: Vec<u64>,
    pub max_count: u64,
    pub min_count: u64,
}

impl OccupancyScan {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Count points in each dyadic cell `prod [m 2^-k, (m+1) 2^-k)`.
///
/// Cells are half-open, so a point on an interior face belongs to the cell
/// above it. A coordinate equal to `1.0` is counted in the last cell.
pub fn occupancy_scan(points: &PointSet, level: u32) -> Result<OccupancyScan> {
    let dim = points.dim();
    let per_axis = 1usize
        .checked_shl(level)
        .filter(|&s| s > 0 && level < usize::BITS)
        .ok_or_else(|| Error::ResourceLimit(format!("level {level} is too deep")))?;
    let cells = (0..dim)
        .try_fold(1usize, |acc, _| acc.checked_mul(per_axis))
        .filter(|&c| c <= MAX_OCCUPANCY_CELLS)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "2^({level}*{dim}) cells exceed the budget of {MAX_OCCUPANCY_CELLS}"
            ))
        })?;
    let mut counts = vec![0u64; cells];
    for p in points.iter() {
        let mut idx = 0usize;
        for &x in p.iter().rev() {
            let c = ((x * per_axis as f64).floor().max(0.0) as usize).min(per_axis - 1);
            idx = idx * per_axis + c;
        }
        counts[idx] += 1;
    }
    let max_count = counts.iter().copied().max().unwrap_or(0);
    let min_count = counts.iter().copied().min().unwrap_or(0);
    Ok(OccupancyScan {
        level,
        counts,
        max_count,
        min_count,
    })
}
