use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::theta::unit_connected;
use super::volume::union_volume_with;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

/// Terms whose acceptance rate falls below this are flagged unreliable.
pub const UNRELIABLE_ACCEPTANCE: f64 = 1e-4;

/// Default number of inner samples per union-of-balls volume (`d >= 2`).
pub const DEFAULT_INNER_SAMPLES: usize = 10_000;

const BATCH: usize = 8192;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTermEstimate {
    pub k_r: usize,
    pub k_b: usize,
    /// Estimated value of the integral.
    pub e: f64,
    pub std_error: f64,
    pub samples: usize,
    /// Fraction of proposals that landed in the connectivity set.
    pub acceptance_rate: f64,
    /// Acceptance rate below [`UNRELIABLE_ACCEPTANCE`].
    pub unreliable: bool,
    /// Estimate with the full inner sample count minus the estimate with a
    /// quarter of it, on the same proposals. Present only when union volumes
    /// are estimated by Monte Carlo.
    pub inner_bias: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermOptions {
    pub samples: usize,
    pub inner_samples: usize,
    pub seed: u64,
    /// Row-major orthogonal `d x d` matrix applied to every proposed point.
    /// The integrand is rotation invariant, so this only changes the noise.
    pub rotation: Option<Vec<f64>>,
}

impl Default for TermOptions {
    fn default() -> Self {
        TermOptions {
            samples: 100_000,
            inner_samples: DEFAULT_INNER_SAMPLES,
            seed: 0,
            rotation: None,
        }
    }
}

/// `w_r J_R + w_b J_B`, where `J_R = ∫_Θ Λ^{-exponent}` over configurations
/// with `r_1` at the origin, `J_B` likewise with `b_1`, and
/// `Λ = α_R |D(blue)| + α_B |D(red)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BranchIntegral {
    pub k_r: usize,
    pub k_b: usize,
    pub dim: usize,
    pub alpha_r: f64,
    pub exponent: f64,
    pub w_r: f64,
    pub w_b: f64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    sum: f64,
    sum_sq: f64,
    accepted: usize,
    count: usize,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            accepted: self.accepted + o.accepted,
            count: self.count + o.count,
        }
    }
}

impl BranchIntegral {
    fn run_batch(&self, n: usize, seed: u64, inner: usize, rotation: Option<&[f64]>) -> Tally {
        let d = self.dim;
        let k = self.k_r + self.k_b;
        let half = k as f64;
        let cube = (2.0 * half).powi(d as i32).powi(k as i32 - 1);
        let total_w = self.w_r + self.w_b;
        let alpha_b = 1.0 - self.alpha_r;
        let mut rng = rng_from_seed(seed);
        let mut red = vec![0.0; self.k_r * d];
        let mut blue = vec![0.0; self.k_b * d];
        let mut x = vec![0.0; d];
        let mut t = Tally::default();
        for _ in 0..n {
            let pin_red = if self.w_b == 0.0 {
                true
            } else if self.w_r == 0.0 {
                false
            } else {
                rng.random::<f64>() * total_w < self.w_r
            };
            let mut slot = 0usize;
            // slot 0 of the pinned color stays at the origin
            for (color_red, len) in [(true, self.k_r), (false, self.k_b)] {
                for i in 0..len {
                    let target = if color_red { &mut red } else { &mut blue };
                    let p = &mut target[i * d..(i + 1) * d];
                    if i == 0 && color_red == pin_red {
                        p.fill(0.0);
                        continue;
                    }
                    for v in x.iter_mut() {
                        *v = (2.0 * rng.random::<f64>() - 1.0) * half;
                    }
                    match rotation {
                        Some(q) => {
                            for a in 0..d {
                                p[a] = (0..d).map(|b| q[a * d + b] * x[b]).sum();
                            }
                        }
                        None => p.copy_from_slice(&x),
                    }
                    slot += 1;
                }
            }
            debug_assert_eq!(slot, k - 1);
            t.count += 1;
            if !unit_connected(&red, &blue, d) {
                continue;
            }
            t.accepted += 1;
            let vol_b = union_volume_with(&blue, d, inner, &mut rng).0;
            let vol_r = union_volume_with(&red, d, inner, &mut rng).0;
            let lambda = self.alpha_r * vol_b + alpha_b * vol_r;
            let value = total_w * cube * lambda.powf(-self.exponent);
            t.sum += value;
            t.sum_sq += value * value;
        }
        t
    }

    fn run(&self, samples: usize, seed: u64, inner: usize, rotation: Option<&[f64]>) -> Tally {
        let batches = samples.div_ceil(BATCH);
        let parts: Vec<Tally> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let n = BATCH.min(samples - b * BATCH);
                self.run_batch(n, derive_seed(seed, &[b as u64]), inner, rotation)
            })
            .collect();
        parts.into_iter().fold(Tally::default(), Tally::merge)
    }

    /// Whether union volumes need inner Monte Carlo.
    fn nested(&self) -> bool {
        self.dim >= 2 && (self.k_r >= 2 || self.k_b >= 2)
    }

    pub fn estimate(&self, opts: &TermOptions) -> Result<SeriesTermEstimate> {
        if opts.samples == 0 {
            return Err(Error::InvalidParameter("need at least one sample".into()));
        }
        if self.nested() && opts.inner_samples == 0 {
            return Err(Error::InvalidParameter("need at least one inner sample".into()));
        }
        if let Some(q) = &opts.rotation {
            check_orthogonal(q, self.dim)?;
        }
        let rot = opts.rotation.as_deref();
        let t = self.run(opts.samples, opts.seed, opts.inner_samples, rot);
        let n = t.count as f64;
        let mean = t.sum / n;
        let var = (t.sum_sq / n - mean * mean).max(0.0);
        let inner_bias = if self.nested() {
            let coarse = self.run(opts.samples, opts.seed, (opts.inner_samples / 4).max(1), rot);
            Some(mean - coarse.sum / coarse.count as f64)
        } else {
            None
        };
        let acceptance_rate = t.accepted as f64 / n;
        Ok(SeriesTermEstimate {
            k_r: self.k_r,
            k_b: self.k_b,
            e: mean,
            std_error: (var / n).sqrt(),
            samples: t.count,
            acceptance_rate,
            unreliable: acceptance_rate < UNRELIABLE_ACCEPTANCE,
            inner_bias,
        })
    }
}

fn check_orthogonal(q: &[f64], d: usize) -> Result<()> {
    if q.len() != d * d {
        return Err(Error::InvalidParameter(format!("rotation must have {} entries", d * d)));
    }
    for a in 0..d {
        for b in 0..d {
            let dot: f64 = (0..d).map(|c| q[a * d + c] * q[b * d + c]).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            if (dot - want).abs() > 1e-9 {
                return Err(Error::InvalidParameter("rotation matrix is not orthogonal".into()));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_alpha(alpha_r: f64) -> Result<()> {
    if !(alpha_r > 0.0 && alpha_r < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha_R must lie in (0, 1), got {alpha_r}")));
    }
    Ok(())
}

/// Monte Carlo estimate of
/// `E(k_R, k_B, α_R) = ∫_Θ Λ^{-(k_R+k_B)/d} (k_R/α_R δ_0(r_1) + k_B/α_B δ_0(b_1))`
/// with `Λ = α_R |D(blue)| + α_B |D(red)|`.
///
/// One of the two pinned branches is drawn per sample with probability
/// proportional to its weight; the free points are uniform in the cube of
/// half-width `k_R + k_B`, which contains every configuration of `Θ`.
pub fn estimate_e(k_r: usize, k_b: usize, alpha_r: f64, dim: usize, samples: usize, seed: u64) -> Result<SeriesTermEstimate> {
    estimate_e_with(
        k_r,
        k_b,
        alpha_r,
        dim,
        &TermOptions {
            samples,
            seed,
            ..TermOptions::default()
        },
    )
}

/// [`estimate_e`] with explicit options.
pub fn estimate_e_with(k_r: usize, k_b: usize, alpha_r: f64, dim: usize, opts: &TermOptions) -> Result<SeriesTermEstimate> {
    check_alpha(alpha_r)?;
    if k_r == 0 || k_b == 0 {
        return Err(Error::InvalidParameter("k_R and k_B must be at least 1".into()));
    }
    if dim == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    if k_r + k_b > 64 {
        return Err(Error::InvalidParameter("at most 64 points per configuration".into()));
    }
    BranchIntegral {
        k_r,
        k_b,
        dim,
        alpha_r,
        exponent: (k_r + k_b) as f64 / dim as f64,
        w_r: k_r as f64 / alpha_r,
        w_b: k_b as f64 / (1.0 - alpha_r),
    }
    .estimate(opts)
}
