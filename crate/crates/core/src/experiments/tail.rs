use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;

/// `F(t) = t ln t - t + 1`, with `F(0) = 1`.
pub fn tail_rate(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t * t.ln() - t + 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailSide {
    /// `N(A) > t n |A|` for `t > 1`.
    Upper,
    /// `N(A) < t n |A|` for `t < 1`.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub n: usize,
    pub dim: usize,
    pub level: u32,
    /// `|A|`, the volume of the first dyadic cell.
    pub region_volume: f64,
    pub t: f64,
    pub side: TailSide,
    pub trials: usize,
    pub exceedances: usize,
    pub frequency: f64,
    /// `exp(-n |A| F(t))`.
    pub bound: f64,
    /// `3 sqrt(b (1 - b) / trials)` with `b` the bound.
    pub allowance: f64,
    pub passed: bool,
    /// Bound within `1e-3` of one, so the check carries no information.
    pub vacuous: bool,
}

/// Empirical tail frequencies of the count of `n` uniform points in the cell
/// `[0, 2^-level)^dim`, compared with the Chernoff bound for each `t`.
/// All `t` share the same samples.
pub fn occupancy_tail_check(n: usize, dim: usize, level: u32, ts: &[f64], trials: usize, seed: u64) -> Result<Vec<TailCheck>> {
    if n == 0 {
        return Err(Error::TooFewPoints { needed: 1, found: 0 });
    }
    if dim == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if level == 0 || level > 52 {
        return Err(Error::InvalidParameter(format!("level must lie in 1..=52, got {level}")));
    }
    for &t in ts {
        if !(t >= 0.0 && t.is_finite()) || t == 1.0 {
            return Err(Error::InvalidParameter(format!("tail parameter t must be nonnegative and differ from 1, got {t}")));
        }
    }
    let side_len = 0.5f64.powi(level as i32);
    let volume = side_len.powi(dim as i32);
    let counts: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            (0..n)
                .filter(|_| {
                    let mut inside = true;
                    for _ in 0..dim {
                        inside &= rng.random::<f64>() < side_len;
                    }
                    inside
                })
                .count()
        })
        .collect();
    let mean = n as f64 * volume;
    Ok(ts
        .iter()
        .map(|&t| {
            let side = if t > 1.0 { TailSide::Upper } else { TailSide::Lower };
            let level_count = t * mean;
            let exceedances = counts
                .iter()
                .filter(|&&c| match side {
                    TailSide::Upper => c as f64 > level_count,
                    TailSide::Lower => (c as f64) < level_count,
                })
                .count();
            let frequency = exceedances as f64 / trials as f64;
            let bound = (-mean * tail_rate(t)).exp();
            let allowance = 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt();
            TailCheck {
                n,
                dim,
                level,
                region_volume: volume,
                t,
                side,
                trials,
                exceedances,
                frequency,
                bound,
                allowance,
                passed: frequency <= bound + allowance,
                vacuous: bound > 1.0 - 1e-3,
            }
        })
        .collect())
}
