//! Point sets, the cube and flat-torus metrics, and point-set statistics.

mod grid;
mod stats;

pub use grid::SpatialGrid;
pub use stats::{hausdorff, nn_max, occupancy_scan, OccupancyScan, MAX_OCCUPANCY_CELLS};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Distance on `[0,1]^d`: plain Euclidean, or the flat torus `R^d / Z^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    UnitCube,
    FlatTorus,
}

impl MetricKind {
    /// Squared distance. Caller guarantees equal lengths.
    #[inline]
    pub fn dist_sq(self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        match self {
            MetricKind::UnitCube => x
                .iter()
                .zip(y)
                .map(|(a, b)| {
                    let t = a - b;
                    t * t
                })
                .sum(),
            MetricKind::FlatTorus => x
                .iter()
                .zip(y)
                .map(|(a, b)| {
                    let t = torus_delta(*a, *b);
                    t * t
                })
                .sum(),
        }
    }

    /// Largest distance between two points of `[0,1]^d`.
    pub fn diameter(self, dim: usize) -> f64 {
        match self {
            MetricKind::UnitCube => (dim as f64).sqrt(),
            MetricKind::FlatTorus => (dim as f64).sqrt() / 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::UnitCube => "unit_cube",
            MetricKind::FlatTorus => "flat_torus",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube" | "unit_cube" | "UnitCube" => Ok(MetricKind::UnitCube),
            "torus" | "flat_torus" | "FlatTorus" => Ok(MetricKind::FlatTorus),
            other => Err(Error::InvalidParameter(format!("unknown metric '{other}'"))),
        }
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-coordinate wrap-around difference `min(|a-b| mod 1, 1 - |a-b| mod 1)`.
#[inline]
fn torus_delta(a: f64, b: f64) -> f64 {
    let t = (a - b).abs().rem_euclid(1.0);
    t.min(1.0 - t)
}

/// Distance between two points, checking dimensions.
pub fn dist(metric: MetricKind, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(metric.dist_sq(x, y).sqrt())
}

/// Volume of the unit ball in `R^d`, `pi^(d/2) / Gamma(d/2 + 1)`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    // ω_d = ω_{d-2} · 2π / d from ω_0 = 1, ω_1 = 2
    let (mut w, mut k) = if dim.is_multiple_of(2) { (1.0, 0) } else { (2.0, 1) };
    while k < dim {
        k += 2;
        w *= 2.0 * std::f64::consts::PI / k as f64;
    }
    w
}

/// A list of points of a common dimension, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        PointSet {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        Ok(PointSet { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut set = PointSet::new(dim.max(1));
        for r in rows {
            set.push(r.as_ref())?;
        }
        Ok(set)
    }

    /// Points on the line, as a convenience for `d = 1`.
    pub fn line(xs: &[f64]) -> Self {
        PointSet {
            dim: 1,
            coords: xs.to_vec(),
        }
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn set_point(&mut self, i: usize, p: &[f64]) {
        self.coords[i * self.dim..(i + 1) * self.dim].copy_from_slice(p);
    }

    /// Subset of the points at the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut out = PointSet::new(self.dim);
        for &i in indices {
            out.coords.extend_from_slice(self.point(i));
        }
        out
    }

    /// Concatenation of two sets with the same dimension.
    pub fn concat(&self, other: &PointSet) -> PointSet {
        assert_eq!(self.dim, other.dim);
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        PointSet {
            dim: self.dim,
            coords,
        }
    }

    /// `n` i.i.d. uniform points of `[0,1)^dim`.
    pub fn uniform<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Self {
        let coords = (0..n * dim).map(|_| rng.random::<f64>()).collect();
        PointSet { dim, coords }
    }

    pub fn in_unit_cube(&self) -> bool {
        self.coords.iter().all(|c| (0.0..=1.0).contains(c))
    }
}

/// Two-colored point cloud in `[0,1]^d`.
///
/// Global vertex numbering, used by every tree built on an instance: red
/// point `i` is vertex `i`, blue point `j` is vertex `n_red + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteInstance {
    pub red: PointSet,
    pub blue: PointSet,
    pub metric: MetricKind,
    pub seed: u64,
}

impl BipartiteInstance {
    pub fn new(red: PointSet, blue: PointSet, metric: MetricKind, seed: u64) -> Result<Self> {
        if red.is_empty() {
            return Err(Error::InvalidInstance("no red points".into()));
        }
        if blue.is_empty() {
            return Err(Error::InvalidInstance("no blue points".into()));
        }
        if red.dim() != blue.dim() {
            return Err(Error::DimensionMismatch {
                expected: red.dim(),
                found: blue.dim(),
            });
        }
        if !red.in_unit_cube() || !blue.in_unit_cube() {
            return Err(Error::InvalidInstance(
                "coordinates must lie in [0,1]".into(),
            ));
        }
        Ok(BipartiteInstance {
            red,
            blue,
            metric,
            seed,
        })
    }

    /// Instance on the line with the cube metric; handy in tests and docs.
    pub fn on_line(red: &[f64], blue: &[f64]) -> Result<Self> {
        Self::new(
            PointSet::line(red),
            PointSet::line(blue),
            MetricKind::UnitCube,
            0,
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.red.dim()
    }

    #[inline]
    pub fn n_red(&self) -> usize {
        self.red.len()
    }

    #[inline]
    pub fn n_blue(&self) -> usize {
        self.blue.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_red() + self.n_blue()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinates of global vertex `v`.
    #[inline]
    pub fn vertex(&self, v: usize) -> &[f64] {
        let nr = self.n_red();
        if v < nr {
            self.red.point(v)
        } else {
            self.blue.point(v - nr)
        }
    }

    #[inline]
    pub fn is_red(&self, v: usize) -> bool {
        v < self.n_red()
    }

    /// Distance between two global vertices under the instance metric.
    #[inline]
    pub fn vertex_dist(&self, u: usize, v: usize) -> f64 {
        self.metric.dist_sq(self.vertex(u), self.vertex(v)).sqrt()
    }

    /// Same points under another metric.
    pub fn with_metric(&self, metric: MetricKind) -> Self {
        BipartiteInstance {
            metric,
            ..self.clone()
        }
    }

    /// All points, red first.
    pub fn all_points(&self) -> PointSet {
        self.red.concat(&self.blue)
    }

    pub fn descriptor(&self) -> String {
        format!(
            "n_R={} n_B={} d={} metric={} seed={}",
            self.n_red(),
            self.n_blue(),
            self.dim(),
            self.metric,
            self.seed
        )
    }
}

/// Draw `n_red` red and `n_blue` blue i.i.d. uniform points in `[0,1)^dim`.
///
/// Red coordinates are drawn first, then blue, from one generator seeded with
/// `seed`.
pub fn sample_uniform(
    n_red: usize,
    n_blue: usize,
    dim: usize,
    metric: MetricKind,
    seed: u64,
) -> Result<BipartiteInstance> {
    if n_red == 0 || n_blue == 0 {
        return Err(Error::InvalidInstance(format!(
            "both color classes must be nonempty (n_R={n_red}, n_B={n_blue})"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidInstance("dimension must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let red = PointSet::uniform(n_red, dim, &mut rng);
    let blue = PointSet::uniform(n_blue, dim, &mut rng);
    Ok(BipartiteInstance {
        red,
        blue,
        metric,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn distance_examples() {
        let t = MetricKind::FlatTorus;
        let c = MetricKind::UnitCube;
        assert!(close(dist(t, &[0.1], &[0.9]).unwrap(), 0.2));
        assert!(close(dist(c, &[0.0, 0.0], &[0.3, 0.4]).unwrap(), 0.5));
        assert!(close(
            dist(t, &[0.9, 0.9], &[0.1, 0.1]).unwrap(),
            0.08f64.sqrt()
        ));
        assert!(matches!(
            dist(c, &[0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn torus_zero_iff_equal_mod_one() {
        assert_eq!(dist(MetricKind::FlatTorus, &[0.0, 0.5], &[1.0, 0.5]).unwrap(), 0.0);
        assert!(dist(MetricKind::UnitCube, &[0.0, 0.5], &[1.0, 0.5]).unwrap() > 0.0);
    }

    #[test]
    fn unit_ball_volumes() {
        assert!(close(unit_ball_volume(1), 2.0));
        assert!(close(unit_ball_volume(2), std::f64::consts::PI));
        assert!(close(unit_ball_volume(3), 4.0 / 3.0 * std::f64::consts::PI));
    }

    #[test]
    fn sample_shape_and_determinism() {
        let a = sample_uniform(3, 2, 2, MetricKind::UnitCube, 42).unwrap();
        assert_eq!(a.n_red(), 3);
        assert_eq!(a.n_blue(), 2);
        assert_eq!(a.len(), 5);
        assert!(a.red.in_unit_cube() && a.blue.in_unit_cube());
        let b = sample_uniform(3, 2, 2, MetricKind::UnitCube, 42).unwrap();
        let bits = |s: &PointSet| s.as_flat().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.red), bits(&b.red));
        assert_eq!(bits(&a.blue), bits(&b.blue));
        assert!(matches!(
            sample_uniform(0, 2, 2, MetricKind::UnitCube, 1),
            Err(Error::InvalidInstance(_))
        ));
    }

    fn triple(d: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        let p = || proptest::collection::vec(0.0f64..1.0, d);
        (p(), p(), p())
    }

    proptest! {
        #[test]
        fn triangle_inequality(d in 1usize..5, seed in any::<u64>()) {
            let mut rng = rng_from_seed(seed);
            let s = PointSet::uniform(3, d, &mut rng);
            for m in [MetricKind::UnitCube, MetricKind::FlatTorus] {
                let (x, y, z) = (s.point(0), s.point(1), s.point(2));
                let xy = m.dist_sq(x, y).sqrt();
                let yz = m.dist_sq(y, z).sqrt();
                let xz = m.dist_sq(x, z).sqrt();
                prop_assert!(xz <= xy + yz + 1e-12);
                prop_assert!(xz <= m.diameter(d) + 1e-12);
            }
        }

        #[test]
        fn torus_never_exceeds_cube((x, y, _z) in triple(3)) {
            let t = MetricKind::FlatTorus.dist_sq(&x, &y);
            let c = MetricKind::UnitCube.dist_sq(&x, &y);
            prop_assert!(t <= c);
            prop_assert_eq!(t, MetricKind::FlatTorus.dist_sq(&y, &x));
        }
    }
}
