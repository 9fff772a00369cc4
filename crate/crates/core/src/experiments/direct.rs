use serde::{Deserialize, Serialize};

use super::plan::{run_records, select, ExperimentPlan, ExperimentRecord};
use super::stats::mean_se;
use crate::error::{Error, Result};
use crate::geometry::MetricKind;

/// Exponents tried for the correction term `b n^-γ`.
const GAMMA_MIN: f64 = 0.05;
const GAMMA_MAX: f64 = 3.0;
const GAMMA_STEP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauRow {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
}

/// Plateau of the normalized torus cost, extrapolated by a weighted fit of
/// `a + b n^-γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectBeta {
    pub d: usize,
    pub p: f64,
    pub alpha_r: f64,
    /// The fitted `a`.
    pub value: f64,
    /// Standard error of `a` at the selected `γ`.
    pub std_error: f64,
    pub gamma: f64,
    pub slope: f64,
    pub chi_squared: f64,
    pub rows: Vec<PlateauRow>,
    pub records: Vec<ExperimentRecord>,
}

struct Fit {
    a: f64,
    b: f64,
    var_a: f64,
    chi2: f64,
}

fn weighted_fit(x: &[f64], y: &[f64], w: &[f64]) -> Fit {
    let s: f64 = w.iter().sum();
    let sx: f64 = w.iter().zip(x).map(|(w, x)| w * x).sum();
    let sy: f64 = w.iter().zip(y).map(|(w, y)| w * y).sum();
    let sxx: f64 = w.iter().zip(x).map(|(w, x)| w * x * x).sum();
    let sxy: f64 = w.iter().zip(x).zip(y).map(|((w, x), y)| w * x * y).sum();
    let det = s * sxx - sx * sx;
    let b = (s * sxy - sx * sy) / det;
    let a = (sxx * sy - sx * sxy) / det;
    let chi2 = w
        .iter()
        .zip(x)
        .zip(y)
        .map(|((w, x), y)| w * (y - a - b * x).powi(2))
        .sum();
    Fit { a, b, var_a: sxx / det, chi2 }
}

/// Direct estimate of the limiting constant from normalized MST costs on the
/// flat torus.
pub fn direct_beta(d: usize, p: f64, alpha_r: f64, n_schedule: &[usize], trials: usize, seed: u64) -> Result<DirectBeta> {
    if n_schedule.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "extrapolation needs at least 3 schedule points, got {}",
            n_schedule.len()
        )));
    }
    if trials < 2 {
        return Err(Error::InvalidParameter("extrapolation needs at least 2 trials per n".into()));
    }
    if p >= d as f64 {
        return Err(Error::OutOfRegime { p, d });
    }
    let mut plan = ExperimentPlan::new("direct_beta", n_schedule.to_vec(), d, p, alpha_r, trials, seed);
    plan.metric = MetricKind::FlatTorus;
    let records = run_records(&plan, &[MetricKind::FlatTorus], false)?;
    let rows: Vec<PlateauRow> = n_schedule
        .iter()
        .map(|&n| {
            let xs: Vec<f64> = select(&records, n, MetricKind::FlatTorus)
                .iter()
                .map(|r| r.normalized_cost)
                .collect();
            let (mean, std_error) = mean_se(&xs);
            PlateauRow { n, mean, std_error }
        })
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r.mean).collect();
    let floor = y.iter().map(|v| v.abs()).fold(0.0, f64::max) * 1e-12 + f64::MIN_POSITIVE;
    let w: Vec<f64> = rows.iter().map(|r| 1.0 / r.std_error.max(floor).powi(2)).collect();
    let steps = ((GAMMA_MAX - GAMMA_MIN) / GAMMA_STEP).round() as usize;
    let (gamma, fit) = (0..=steps)
        .map(|i| {
            let g = GAMMA_MIN + i as f64 * GAMMA_STEP;
            let x: Vec<f64> = rows.iter().map(|r| (r.n as f64).powf(-g)).collect();
            (g, weighted_fit(&x, &y, &w))
        })
        .min_by(|a, b| a.1.chi2.total_cmp(&b.1.chi2))
        .expect("nonempty gamma grid");
    Ok(DirectBeta {
        d,
        p,
        alpha_r,
        value: fit.a,
        std_error: fit.var_a.sqrt(),
        gamma,
        slope: fit.b,
        chi_squared: fit.chi2,
        rows,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_synthetic_power_law() {
        let x: Vec<f64> = [100.0f64, 400.0, 1600.0, 6400.0].iter().map(|n| n.powf(-0.5)).collect();
        let y: Vec<f64> = x.iter().map(|x| 2.0 + 3.0 * x).collect();
        let f = weighted_fit(&x, &y, &[1.0; 4]);
        assert!((f.a - 2.0).abs() < 1e-12 && (f.b - 3.0).abs() < 1e-12);
        assert!(f.chi2 < 1e-20);
    }

    #[test]
    fn input_errors() {
        assert!(direct_beta(1, 0.5, 0.5, &[64, 128], 4, 0).is_err());
        assert!(direct_beta(1, 0.5, 0.5, &[64, 128, 256], 0, 0).is_err());
        assert!(direct_beta(1, 1.0, 0.5, &[64, 128, 256], 4, 0).is_err());
    }

    #[test]
    fn small_run_is_plausible() {
        let r = direct_beta(1, 0.5, 0.5, &[256, 512, 1024, 2048], 8, 1).unwrap();
        assert!(r.value > 0.5 && r.value < 2.0, "{}", r.value);
        assert!(r.std_error.is_finite());
    }
}
