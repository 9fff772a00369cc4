use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;
use crate::rng::rng_from_seed;

/// Lebesgue measure of the union of closed unit balls centred at `points`
/// (flat, row-major), with its standard error.
///
/// Exact in dimension 1 and for a single ball; otherwise hit-or-miss Monte
/// Carlo with `samples` draws in the bounding box of the balls.
pub fn union_ball_volume(points: &[f64], dim: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if dim == 0 || !points.len().is_multiple_of(dim) {
        return Err(Error::InvalidParameter("coordinate count is not a multiple of the dimension".into()));
    }
    if points.is_empty() {
        return Err(Error::EmptySet("ball centres"));
    }
    if dim >= 2 && points.len() > dim && samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    Ok(union_volume_with(points, dim, samples, &mut rng_from_seed(seed)))
}

pub(crate) fn union_volume_with<R: Rng + ?Sized>(points: &[f64], dim: usize, samples: usize, rng: &mut R) -> (f64, f64) {
    let k = points.len() / dim;
    if k == 0 {
        return (0.0, 0.0);
    }
    if k == 1 {
        return (unit_ball_volume(dim), 0.0);
    }
    if dim == 1 {
        return (interval_union_length(points), 0.0);
    }
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points.chunks_exact(dim) {
        for a in 0..dim {
            lo[a] = lo[a].min(p[a] - 1.0);
            hi[a] = hi[a].max(p[a] + 1.0);
        }
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let mut x = vec![0.0; dim];
    let mut hits = 0usize;
    for _ in 0..samples {
        for a in 0..dim {
            x[a] = lo[a] + (hi[a] - lo[a]) * rng.random::<f64>();
        }
        let inside = points.chunks_exact(dim).any(|p| {
            let mut s = 0.0;
            for (u, v) in p.iter().zip(&x) {
                s += (u - v) * (u - v);
            }
            s <= 1.0
        });
        if inside {
            hits += 1;
        }
    }
    let f = hits as f64 / samples as f64;
    (box_vol * f, box_vol * (f * (1.0 - f) / samples as f64).sqrt())
}

fn interval_union_length(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let mut total = 0.0;
    let (mut start, mut end) = (v[0] - 1.0, v[0] + 1.0);
    for &x in &v[1..] {
        if x - 1.0 > end {
            total += end - start;
            start = x - 1.0;
        }
        end = end.max(x + 1.0);
    }
    total + end - start
}
