use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::term::{check_alpha, BranchIntegral, SeriesTermEstimate, TermOptions, DEFAULT_INNER_SAMPLES};
use crate::error::{Error, Result};
use crate::geometry::unit_ball_volume;
use crate::rng::derive_seed;

/// Which series to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesForm {
    /// `(p/d) Σ_{k_R,k_B>=1} (α_R^{k_R}/k_R!)(α_B^{k_B}/k_B!) Γ(k/d)/k · E(k_R,k_B,α_R)`
    /// with `E` as in [`estimate_e`](super::estimate_e).
    Printed,
    /// `(p/d) Σ_{k>=1} Σ_{k_R+k_B=k} (α_R^{k_R}/k_R!)(α_B^{k_B}/k_B!) Γ(s)/k · (k_R J_R(s) + k_B J_B(s))`
    /// with `s = k - 1 + p/d`, where `J_R(s) = ∫_Θ Λ^{-s}` with `r_1` at the
    /// origin and `J_B` likewise with `b_1`. Includes the isolated-point terms
    /// `(1,0)` and `(0,1)`. This is the form obtained by carrying the change
    /// of variables `z = (y/n)^{p/d}` through for general `p` and `d`, and the
    /// one that matches direct simulation.
    #[default]
    Rederived,
}

impl SeriesForm {
    pub fn name(self) -> &'static str {
        match self {
            SeriesForm::Printed => "printed",
            SeriesForm::Rederived => "rederived",
        }
    }
}

impl fmt::Display for SeriesForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "printed" => Ok(SeriesForm::Printed),
            "rederived" => Ok(SeriesForm::Rederived),
            other => Err(Error::InvalidParameter(format!("unknown series form '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaOptions {
    pub dim: usize,
    pub p: f64,
    pub alpha_r: f64,
    /// Largest `k_R + k_B` summed.
    pub k_max: usize,
    pub samples: usize,
    pub inner_samples: usize,
    pub form: SeriesForm,
    pub seed: u64,
}

impl BetaOptions {
    pub fn new(dim: usize, p: f64, alpha_r: f64) -> Self {
        BetaOptions {
            dim,
            p,
            alpha_r,
            k_max: 8,
            samples: 100_000,
            inner_samples: DEFAULT_INNER_SAMPLES,
            form: SeriesForm::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm {
    /// Factor multiplying the integral estimate.
    pub coefficient: f64,
    pub estimate: SeriesTermEstimate,
    pub contribution: f64,
    pub contribution_std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEstimate {
    pub d: usize,
    pub p: f64,
    pub alpha_r: f64,
    pub form: SeriesForm,
    /// Partial sum over `k_R + k_B <= k_max`.
    pub value: f64,
    pub std_error: f64,
    pub k_max: usize,
    /// Geometric extrapolation of the last two order sums; infinite when they
    /// do not decrease. A heuristic, not a certified bound.
    pub tail_bound: f64,
    /// Upper bound on the order `k_max + 1` sum from the domination
    /// `|Θ| <= k^{k-2} ω_d^{k-1}`, `Λ >= ω_d min(α_R, α_B)`. It grows
    /// geometrically in `k`, so it bounds one term, not the tail.
    pub next_term_bound: f64,
    /// Sum of the contributions of each order `k = 1..=k_max`.
    pub order_sums: Vec<f64>,
    pub unreliable_terms: usize,
    pub terms: Vec<SeriesTerm>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn prefactor(alpha_r: f64, k_r: usize, k_b: usize) -> f64 {
    alpha_r.powi(k_r as i32) / factorial(k_r) * (1.0 - alpha_r).powi(k_b as i32) / factorial(k_b)
}

fn exponent(form: SeriesForm, k: usize, dim: usize, p: f64) -> f64 {
    let d = dim as f64;
    match form {
        SeriesForm::Printed => k as f64 / d,
        SeriesForm::Rederived => k as f64 - 1.0 + p / d,
    }
}

fn branch_weights(form: SeriesForm, k_r: usize, k_b: usize, alpha_r: f64) -> (f64, f64) {
    match form {
        SeriesForm::Printed => (k_r as f64 / alpha_r, k_b as f64 / (1.0 - alpha_r)),
        SeriesForm::Rederived => (k_r as f64, k_b as f64),
    }
}

/// `(k_R, k_B)` pairs with `k_R + k_B = k` that carry a nonzero term.
fn pairs(form: SeriesForm, k: usize) -> Vec<(usize, usize)> {
    match (form, k) {
        (SeriesForm::Printed, 1) => Vec::new(),
        (SeriesForm::Rederived, 1) => vec![(1, 0), (0, 1)],
        _ => (1..k).map(|kr| (kr, k - kr)).collect(),
    }
}

fn coefficient(form: SeriesForm, dim: usize, p: f64, alpha_r: f64, k_r: usize, k_b: usize) -> f64 {
    let k = k_r + k_b;
    p / dim as f64 * prefactor(alpha_r, k_r, k_b) * gamma(exponent(form, k, dim, p)) / k as f64
}

/// Domination bound for the order-`k` sum.
pub(crate) fn domination_bound(form: SeriesForm, dim: usize, p: f64, alpha_r: f64, k: usize) -> f64 {
    let omega = unit_ball_volume(dim);
    let s = exponent(form, k, dim, p);
    let lambda_min = omega * alpha_r.min(1.0 - alpha_r);
    let theta = (k as f64).powi(k as i32 - 2) * omega.powi(k as i32 - 1);
    pairs(form, k)
        .into_iter()
        .map(|(kr, kb)| {
            let lmin = if kr == 0 || kb == 0 {
                omega * if kr == 0 { alpha_r } else { 1.0 - alpha_r }
            } else {
                lambda_min
            };
            let (wr, wb) = branch_weights(form, kr, kb, alpha_r);
            coefficient(form, dim, p, alpha_r, kr, kb) * (wr + wb) * theta * lmin.powf(-s)
        })
        .sum()
}

/// Series estimate of the limit constant in the [`SeriesForm::Rederived`]
/// form.
pub fn estimate_beta(dim: usize, p: f64, alpha_r: f64, k_max: usize, samples_per_term: usize, seed: u64) -> Result<BetaEstimate> {
    estimate_beta_with(&BetaOptions {
        k_max,
        samples: samples_per_term,
        seed,
        ..BetaOptions::new(dim, p, alpha_r)
    })
}

/// Sums all terms of order `k <= k_max`; term estimates run in parallel,
/// each on its own seed derived from `(seed, k_R, k_B)`.
pub fn estimate_beta_with(opts: &BetaOptions) -> Result<BetaEstimate> {
    let BetaOptions { dim, p, alpha_r, k_max, form, .. } = *opts;
    if dim == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent must be positive, got {p}")));
    }
    if p >= dim as f64 {
        return Err(Error::OutOfRegime { p, d: dim });
    }
    check_alpha(alpha_r)?;
    if k_max < 2 {
        return Err(Error::InvalidParameter(format!("truncation order must be at least 2, got {k_max}")));
    }
    if k_max > 64 {
        return Err(Error::InvalidParameter("truncation order above 64 is not supported".into()));
    }
    let jobs: Vec<(usize, usize)> = (1..=k_max).flat_map(|k| pairs(form, k)).collect();
    let terms: Vec<SeriesTerm> = jobs
        .par_iter()
        .map(|&(k_r, k_b)| -> Result<SeriesTerm> {
            let k = k_r + k_b;
            let (w_r, w_b) = branch_weights(form, k_r, k_b, alpha_r);
            let integral = BranchIntegral {
                k_r,
                k_b,
                dim,
                alpha_r,
                exponent: exponent(form, k, dim, p),
                w_r,
                w_b,
            };
            let estimate = integral.estimate(&TermOptions {
                samples: opts.samples,
                inner_samples: opts.inner_samples,
                seed: derive_seed(opts.seed, &[k_r as u64, k_b as u64]),
                rotation: None,
            })?;
            let c = coefficient(form, dim, p, alpha_r, k_r, k_b);
            Ok(SeriesTerm {
                coefficient: c,
                contribution: c * estimate.e,
                contribution_std_error: c * estimate.std_error,
                estimate,
            })
        })
        .collect::<Result<_>>()?;
    let mut order_sums = vec![0.0; k_max];
    for t in &terms {
        order_sums[t.estimate.k_r + t.estimate.k_b - 1] += t.contribution;
    }
    let value = terms.iter().map(|t| t.contribution).sum();
    let std_error = terms
        .iter()
        .map(|t| t.contribution_std_error * t.contribution_std_error)
        .sum::<f64>()
        .sqrt();
    let (last, prev) = (order_sums[k_max - 1], order_sums[k_max - 2]);
    let tail_bound = if prev > 0.0 && last >= 0.0 && last < prev {
        let q = last / prev;
        last * q / (1.0 - q)
    } else {
        f64::INFINITY
    };
    Ok(BetaEstimate {
        d: dim,
        p,
        alpha_r,
        form,
        value,
        std_error,
        k_max,
        tail_bound,
        next_term_bound: domination_bound(form, dim, p, alpha_r, k_max + 1),
        order_sums,
        unreliable_terms: terms.iter().filter(|t| t.estimate.unreliable).count(),
        terms,
    })
}
