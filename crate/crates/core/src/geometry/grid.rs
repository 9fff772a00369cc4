use super::{MetricKind, PointSet};

/// Grids are only refined up to this dimension; above it a single cell is used.
const MAX_GRID_DIM: usize = 8;

/// Uniform bucket grid over `[0,1]^d` answering nearest-neighbor and range
/// queries by expanding rings of cells.
///
/// On the flat torus the cell lattice wraps around. After rings `0..=r` have
/// been scanned, every unscanned point is at distance strictly greater than
/// `r * h` from the query, where `h` is the cell side; searches stop on that
/// bound.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    dim: usize,
    side: usize,
    h: f64,
    metric: MetricKind,
    cell_start: Vec<u32>,
    // original index and coordinates of points, grouped by cell
    items: Vec<u32>,
    coords: Vec<f64>,
}

impl SpatialGrid {
    /// Grid with about `per_cell` points per cell on average.
    pub fn build(points: &PointSet, metric: MetricKind, per_cell: f64) -> Self {
        let n = points.len().max(1);
        let dim = points.dim();
        let side = if dim > MAX_GRID_DIM {
            1
        } else {
            let s = (n as f64 / per_cell.max(1e-9)).powf(1.0 / dim as f64).floor() as usize;
            let mut s = s.max(1);
            // keep the number of cells within a small multiple of n
            while s > 1 && (s as f64).powi(dim as i32) > 4.0 * n as f64 + 16.0 {
                s -= 1;
            }
            s
        };
        Self::with_side(points, metric, side)
    }

    pub fn with_side(points: &PointSet, metric: MetricKind, side: usize) -> Self {
        let dim = points.dim();
        let side = if dim > MAX_GRID_DIM { 1 } else { side.max(1) };
        let ncells = side.pow(dim as u32);
        let cell_of: Vec<usize> = points
            .iter()
            .map(|p| Self::linear_cell(p, side))
            .collect();
        let mut counts = vec![0u32; ncells + 1];
        for &c in &cell_of {
            counts[c + 1] += 1;
        }
        for i in 0..ncells {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut items = vec![0u32; points.len()];
        let mut coords = vec![0.0; points.len() * dim];
        for (i, &c) in cell_of.iter().enumerate() {
            let slot = fill[c] as usize;
            fill[c] += 1;
            items[slot] = i as u32;
            coords[slot * dim..(slot + 1) * dim].copy_from_slice(points.point(i));
        }
        SpatialGrid {
            dim,
            side,
            h: 1.0 / side as f64,
            metric,
            cell_start: counts,
            items,
            coords,
        }
    }

    #[inline]
    fn axis_cell(x: f64, side: usize) -> usize {
        let c = (x.clamp(0.0, 1.0) * side as f64).floor() as usize;
        c.min(side - 1)
    }

    fn linear_cell(p: &[f64], side: usize) -> usize {
        if p.len() > MAX_GRID_DIM {
            return 0;
        }
        p.iter()
            .rev()
            .fold(0usize, |acc, &x| acc * side + Self::axis_cell(x, side))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn side(&self) -> usize {
        self.side
    }

    fn max_ring(&self) -> usize {
        match self.metric {
            MetricKind::UnitCube => self.side - 1,
            MetricKind::FlatTorus => self.side / 2,
        }
    }

    /// Calls `visit(slot_begin, slot_end)` for every cell of ring `r` around
    /// the center cell.
    fn for_ring<F: FnMut(usize, usize)>(&self, center: &[usize; MAX_GRID_DIM], r: usize, mut visit: F) {
        let d = if self.dim > MAX_GRID_DIM { 0 } else { self.dim };
        if d == 0 || self.side == 1 {
            if r == 0 {
                visit(0, self.items.len());
            }
            return;
        }
        let side = self.side as isize;
        let ri = r as isize;
        let mut off = [-ri; MAX_GRID_DIM];
        loop {
            let mut on_ring = false;
            let mut linear = 0usize;
            let mut ok = true;
            for a in (0..d).rev() {
                let o = off[a];
                if o.unsigned_abs() == r {
                    on_ring = true;
                }
                let c = center[a] as isize + o;
                let cell = match self.metric {
                    MetricKind::UnitCube => {
                        if c < 0 || c >= side {
                            ok = false;
                            break;
                        }
                        c
                    }
                    MetricKind::FlatTorus => {
                        let w = c.rem_euclid(side);
                        let delta = o.rem_euclid(side);
                        let canon = if 2 * delta <= side { delta } else { delta - side };
                        if canon != o {
                            ok = false;
                            break;
                        }
                        w
                    }
                };
                linear = linear * self.side + cell as usize;
            }
            if ok && on_ring {
                let b = self.cell_start[linear] as usize;
                let e = self.cell_start[linear + 1] as usize;
                if b < e {
                    visit(b, e);
                }
            }
            // odometer increment
            let mut a = 0;
            loop {
                if a == d {
                    return;
                }
                off[a] += 1;
                if off[a] > ri {
                    off[a] = -ri;
                    a += 1;
                } else {
                    break;
                }
            }
        }
    }

    fn center(&self, x: &[f64]) -> [usize; MAX_GRID_DIM] {
        let mut c = [0usize; MAX_GRID_DIM];
        if self.dim <= MAX_GRID_DIM {
            for (a, &v) in x.iter().enumerate() {
                c[a] = Self::axis_cell(v, self.side);
            }
        }
        c
    }

    /// Nearest accepted point to `x` by `(squared distance, index)`, among
    /// points with squared distance at most `upper_sq`.
    pub fn nearest<F: FnMut(usize) -> bool>(
        &self,
        x: &[f64],
        upper_sq: f64,
        mut accept: F,
    ) -> Option<(f64, usize)> {
        let center = self.center(x);
        let mut best: Option<(f64, usize)> = None;
        for r in 0..=self.max_ring() {
            self.for_ring(&center, r, |b, e| {
                for slot in b..e {
                    let idx = self.items[slot] as usize;
                    let d2 = self
                        .metric
                        .dist_sq(x, &self.coords[slot * self.dim..(slot + 1) * self.dim]);
                    if d2 > upper_sq {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bd, bi)) => d2 < bd || (d2 == bd && idx < bi),
                    };
                    if better && accept(idx) {
                        best = Some((d2, idx));
                    }
                }
            });
            let reach = r as f64 * self.h;
            let reach_sq = reach * reach;
            if reach_sq >= upper_sq {
                break;
            }
            if let Some((bd, _)) = best {
                if bd <= reach_sq {
                    break;
                }
            }
        }
        best
    }

    /// The `k` nearest accepted points, sorted by `(squared distance, index)`.
    pub fn k_nearest<F: FnMut(usize) -> bool>(
        &self,
        x: &[f64],
        k: usize,
        mut accept: F,
    ) -> Vec<(f64, usize)> {
        let center = self.center(x);
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        if k == 0 {
            return best;
        }
        let less = |a: &(f64, usize), b: &(f64, usize)| a.0 < b.0 || (a.0 == b.0 && a.1 < b.1);
        for r in 0..=self.max_ring() {
            self.for_ring(&center, r, |b, e| {
                for slot in b..e {
                    let idx = self.items[slot] as usize;
                    let d2 = self
                        .metric
                        .dist_sq(x, &self.coords[slot * self.dim..(slot + 1) * self.dim]);
                    let cand = (d2, idx);
                    if best.len() == k && !less(&cand, &best[k - 1]) {
                        continue;
                    }
                    if !accept(idx) {
                        continue;
                    }
                    let pos = best.partition_point(|q| less(q, &cand));
                    best.insert(pos, cand);
                    best.truncate(k);
                }
            });
            let reach = r as f64 * self.h;
            if best.len() == k && best[k - 1].0 <= reach * reach {
                break;
            }
        }
        best
    }

    /// Calls `f(index, squared distance)` for every point with squared
    /// distance `< r_sq` (or `<= r_sq` when `inclusive`).
    pub fn within<F: FnMut(usize, f64)>(&self, x: &[f64], r_sq: f64, inclusive: bool, mut f: F) {
        let center = self.center(x);
        for r in 0..=self.max_ring() {
            self.for_ring(&center, r, |b, e| {
                for slot in b..e {
                    let d2 = self
                        .metric
                        .dist_sq(x, &self.coords[slot * self.dim..(slot + 1) * self.dim]);
                    if d2 < r_sq || (inclusive && d2 == r_sq) {
                        f(self.items[slot] as usize, d2);
                    }
                }
            });
            let reach = r as f64 * self.h;
            if reach * reach >= r_sq {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn brute_nearest(ps: &PointSet, m: MetricKind, x: &[f64], skip: usize) -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, p) in ps.iter().enumerate() {
            if i == skip {
                continue;
            }
            let d2 = m.dist_sq(x, p);
            if d2 < best.0 || (d2 == best.0 && i < best.1) {
                best = (d2, i);
            }
        }
        best
    }

    #[test]
    fn nearest_matches_brute_force() {
        let mut rng = rng_from_seed(11);
        for dim in 1..=4 {
            for m in [MetricKind::UnitCube, MetricKind::FlatTorus] {
                for &n in &[1usize, 2, 7, 50, 400] {
                    let ps = PointSet::uniform(n, dim, &mut rng);
                    let grid = SpatialGrid::build(&ps, m, 1.5);
                    let qs = PointSet::uniform(30, dim, &mut rng);
                    for q in qs.iter() {
                        let got = grid.nearest(q, f64::INFINITY, |_| true).unwrap();
                        assert_eq!(got, brute_nearest(&ps, m, q, usize::MAX));
                    }
                    for i in 0..n.min(20) {
                        let got = grid.nearest(ps.point(i), f64::INFINITY, |j| j != i);
                        if n == 1 {
                            assert!(got.is_none());
                        } else {
                            assert_eq!(got.unwrap(), brute_nearest(&ps, m, ps.point(i), i));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn k_nearest_and_range_match_brute_force() {
        let mut rng = rng_from_seed(5);
        for dim in 1..=3 {
            for m in [MetricKind::UnitCube, MetricKind::FlatTorus] {
                let ps = PointSet::uniform(300, dim, &mut rng);
                let grid = SpatialGrid::build(&ps, m, 2.0);
                let q = [0.31, 0.97, 0.02];
                let q = &q[..dim];
                let mut all: Vec<(f64, usize)> =
                    ps.iter().enumerate().map(|(i, p)| (m.dist_sq(q, p), i)).collect();
                all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                assert_eq!(grid.k_nearest(q, 5, |_| true), all[..5].to_vec());
                let r_sq = all[17].0;
                let mut got = Vec::new();
                grid.within(q, r_sq, false, |i, _| got.push(i));
                got.sort_unstable();
                let mut want: Vec<usize> = all[..17].iter().map(|x| x.1).collect();
                want.sort_unstable();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn upper_bound_excludes_far_points() {
        let ps = PointSet::line(&[0.0, 0.9]);
        let grid = SpatialGrid::with_side(&ps, MetricKind::UnitCube, 10);
        assert!(grid.nearest(&[0.5], 0.1, |_| true).is_none());
        assert_eq!(grid.nearest(&[0.5], 0.17, |_| true).map(|x| x.1), Some(1));
    }
}
