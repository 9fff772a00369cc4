use serde::{Deserialize, Serialize};

use super::{LemmaId, LemmaReport, Witness};
use crate::error::{Error, Result};
use crate::geometry::{MetricKind, PointSet};
use crate::mst::euclidean_mst;

/// Bits per axis of the discretization grid.
pub const HILBERT_BITS: u32 = 10;

/// Position of the grid cell `cell` along the Hilbert curve of order `bits`
/// in `cell.len()` dimensions (Skilling's transpose construction).
pub fn hilbert_index(cell: &[u32], bits: u32) -> u64 {
    let n = cell.len();
    assert!(n >= 1 && bits >= 1 && n as u32 * bits <= 64);
    let mut x = cell.to_vec();
    let m = 1u32 << (bits - 1);
    let mut q = m;
    while q > 1 {
        let p = q - 1;
        for i in 0..n {
            if x[i] & q != 0 {
                x[0] ^= p;
            } else {
                let t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
        q >>= 1;
    }
    for i in 1..n {
        x[i] ^= x[i - 1];
    }
    let mut t = 0;
    q = m;
    while q > 1 {
        if x[n - 1] & q != 0 {
            t ^= q - 1;
        }
        q >>= 1;
    }
    for v in x.iter_mut() {
        *v ^= t;
    }
    let mut idx = 0u64;
    for b in (0..bits).rev() {
        for v in &x {
            idx = (idx << 1) | ((v >> b) & 1) as u64;
        }
    }
    idx
}

/// Point indices sorted by Hilbert index at [`HILBERT_BITS`] bits per axis;
/// points in the same cell keep index order.
pub fn hilbert_order(points: &PointSet) -> Result<Vec<usize>> {
    let d = points.dim();
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if !points.in_unit_cube() {
        return Err(Error::InvalidInstance("coordinates must lie in [0,1]".into()));
    }
    let side = 1u32 << HILBERT_BITS;
    let mut keyed: Vec<(u64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let cell: Vec<u32> = p
                .iter()
                .map(|&c| ((c * side as f64) as u32).min(side - 1))
                .collect();
            (hilbert_index(&cell, HILBERT_BITS), i)
        })
        .collect();
    keyed.sort_unstable();
    Ok(keyed.into_iter().map(|(_, i)| i).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertChain {
    /// `sum |x_{i+1} - x_i|^p` along the Hilbert order.
    pub cost: f64,
    pub mst_cost: f64,
    /// `cost / n^{1 - p/d}`.
    pub constant: f64,
    pub report: LemmaReport,
}

/// Cost of the path visiting the points in Hilbert order, checked against
/// the Euclidean MST cost, which it must dominate.
pub fn hilbert_chain_bound(points: &PointSet, p: f64) -> Result<HilbertChain> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent must be positive, got {p}")));
    }
    let order = hilbert_order(points)?;
    let metric = MetricKind::UnitCube;
    let cost: f64 = order
        .windows(2)
        .map(|w| metric.dist_sq(points.point(w[0]), points.point(w[1])).sqrt().powf(p))
        .sum();
    let mst_cost = if points.is_empty() {
        0.0
    } else {
        euclidean_mst(points, metric)?.cost(p)
    };
    let n = points.len() as f64;
    let rate = n.powf(1.0 - p / points.dim() as f64);
    let constant = if n > 0.0 { cost / rate } else { 0.0 };
    let instance = format!("n={} d={} p={}", points.len(), points.dim(), p);
    let slack = cost - mst_cost;
    // the MST is computed independently; allow for summation order
    let tol = 1e-9 * mst_cost.max(1.0);
    let report = if slack >= -tol {
        LemmaReport::pass(LemmaId::HilbertChain, instance, slack)
    } else {
        LemmaReport::fail(
            LemmaId::HilbertChain,
            instance,
            slack,
            Witness {
                description: "Hilbert chain is cheaper than the MST".into(),
                vertices: Vec::new(),
                value: cost,
            },
        )
    };
    Ok(HilbertChain {
        cost,
        mst_cost,
        constant,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cells(d: usize, bits: u32) -> Vec<Vec<u32>> {
        let side = 1u32 << bits;
        let total = (side as usize).pow(d as u32);
        (0..total)
            .map(|mut c| {
                (0..d)
                    .map(|_| {
                        let v = (c % side as usize) as u32;
                        c /= side as usize;
                        v
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn index_is_a_bijection_with_adjacent_steps() {
        for (d, bits) in [(1, 5), (2, 4), (3, 3), (2, 10)] {
            let all = cells(d, bits);
            let mut by_index = vec![None; all.len()];
            let mut seen = HashSet::new();
            for c in &all {
                let h = hilbert_index(c, bits) as usize;
                assert!(seen.insert(h));
                by_index[h] = Some(c.clone());
            }
            for w in by_index.windows(2) {
                let (a, b) = (w[0].as_ref().unwrap(), w[1].as_ref().unwrap());
                let l1: u32 = a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum();
                assert_eq!(l1, 1, "d={d}");
            }
        }
    }

    #[test]
    fn unit_square_corners() {
        let pts = PointSet::from_rows(2, &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        let h = hilbert_chain_bound(&pts, 1.0).unwrap();
        assert!((h.cost - 3.0).abs() < 1e-12);
        assert!((h.mst_cost - 3.0).abs() < 1e-12);
        assert!(h.report.passed());
    }

    #[test]
    fn line_chain_is_the_mst() {
        // distinct cells at 10 bits
        let xs: Vec<f64> = (0..200).map(|i| ((i * 37) % 200) as f64 / 200.0 + 1e-4).collect();
        let pts = PointSet::line(&xs);
        let h = hilbert_chain_bound(&pts, 1.0).unwrap();
        assert!((h.cost - h.mst_cost).abs() < 1e-12);
        assert!((h.cost - (199.0 / 200.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_high_dimension() {
        let pts = PointSet::from_rows(4, &[[0.1; 4]]).unwrap();
        assert!(matches!(hilbert_chain_bound(&pts, 1.0), Err(Error::UnsupportedDimension(4))));
    }
}
