use serde::{Deserialize, Serialize};

use super::plan::{run_records, select, ExperimentPlan, ExperimentRecord};
use super::stats::{inversions, line_fit, mean_se, median, relative_deviation};
use crate::error::{Error, Result};
use crate::geometry::MetricKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub n: usize,
    pub median_degree: f64,
    /// Median, minimum and maximum of `Δ(T) / ln n` over trials.
    pub median_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeScan {
    pub rows: Vec<DegreeRow>,
    /// Largest over smallest median ratio.
    pub band_ratio: f64,
    /// Least-squares fit of the median degree against `ln n`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Median degree never decreases along the schedule.
    pub nondecreasing: bool,
    pub records: Vec<ExperimentRecord>,
}

/// Maximum degree of the bipartite MST relative to `ln n`.
pub fn degree_scan(plan: &ExperimentPlan) -> Result<DegreeScan> {
    let records = run_records(plan, &[plan.metric], plan.timing)?;
    let rows: Vec<DegreeRow> = plan
        .n_schedule
        .iter()
        .map(|&n| {
            let ln = (n as f64).ln();
            let sel = select(&records, n, plan.metric);
            let degrees: Vec<f64> = sel.iter().map(|r| r.max_degree as f64).collect();
            let ratios: Vec<f64> = degrees.iter().map(|d| d / ln).collect();
            DegreeRow {
                n,
                median_degree: median(&degrees),
                median_ratio: median(&ratios),
                min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                max_ratio: ratios.iter().copied().fold(0.0, f64::max),
            }
        })
        .collect();
    let meds: Vec<f64> = rows.iter().map(|r| r.median_ratio).collect();
    let band_ratio = meds.iter().copied().fold(0.0, f64::max) / meds.iter().copied().fold(f64::INFINITY, f64::min);
    let x: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.median_degree).collect();
    let fit = if rows.len() >= 2 {
        line_fit(&x, &y)
    } else {
        super::stats::LineFit { intercept: y[0], slope: 0.0, r_squared: f64::NAN }
    };
    Ok(DegreeScan {
        nondecreasing: y.windows(2).all(|w| w[1] >= w[0]),
        rows,
        band_ratio,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub cube_mean: f64,
    pub cube_std_error: f64,
    pub torus_mean: f64,
    pub torus_std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingScan {
    pub rows: Vec<ScalingRow>,
    /// Last over second-to-last mean normalized cost.
    pub cube_plateau_ratio: f64,
    pub torus_plateau_ratio: f64,
    /// `|last - first| / last` of the mean normalized cost.
    pub cube_drift: f64,
    pub torus_drift: f64,
    pub records: Vec<ExperimentRecord>,
}

fn require_regime(plan: &ExperimentPlan) -> Result<()> {
    if plan.p >= plan.d as f64 {
        return Err(Error::OutOfRegime { p: plan.p, d: plan.d });
    }
    Ok(())
}

/// Mean of `cost_p / n^{1-p/d}` per `n`, on the cube and on the torus for the
/// same point sets.
pub fn scaling_scan(plan: &ExperimentPlan) -> Result<ScalingScan> {
    require_regime(plan)?;
    let records = run_records(plan, &[MetricKind::UnitCube, MetricKind::FlatTorus], plan.timing)?;
    let stat = |n: usize, m: MetricKind| {
        let xs: Vec<f64> = select(&records, n, m).iter().map(|r| r.normalized_cost).collect();
        mean_se(&xs)
    };
    let rows: Vec<ScalingRow> = plan
        .n_schedule
        .iter()
        .map(|&n| {
            let (cube_mean, cube_std_error) = stat(n, MetricKind::UnitCube);
            let (torus_mean, torus_std_error) = stat(n, MetricKind::FlatTorus);
            ScalingRow { n, cube_mean, cube_std_error, torus_mean, torus_std_error }
        })
        .collect();
    let last = rows.len() - 1;
    let prev = last.saturating_sub(1);
    let first = &rows[0];
    Ok(ScalingScan {
        cube_plateau_ratio: rows[last].cube_mean / rows[prev].cube_mean,
        torus_plateau_ratio: rows[last].torus_mean / rows[prev].torus_mean,
        cube_drift: (rows[last].cube_mean - first.cube_mean).abs() / rows[last].cube_mean,
        torus_drift: (rows[last].torus_mean - first.torus_mean).abs() / rows[last].torus_mean,
        rows,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n: usize,
    /// Median of `hausdorff · (n / ln n)^{1/d}`.
    pub hausdorff_median: f64,
    /// Median of `nn_max_red · (n / ln n)^{1/d}`.
    pub nn_max_median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateStatistics {
    pub rows: Vec<RateRow>,
    pub hausdorff_band_ratio: f64,
    pub nn_max_band_ratio: f64,
    pub records: Vec<ExperimentRecord>,
}

fn band(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    xs.clone().fold(0.0, f64::max) / xs.fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance between the colors and the largest red
/// nearest-neighbor distance, both scaled by `(n / ln n)^{1/d}`.
pub fn rate_statistics(plan: &ExperimentPlan) -> Result<RateStatistics> {
    let records = run_records(plan, &[plan.metric], plan.timing)?;
    let rows: Vec<RateRow> = plan
        .n_schedule
        .iter()
        .map(|&n| {
            let scale = (n as f64 / (n as f64).ln()).powf(1.0 / plan.d as f64);
            let sel = select(&records, n, plan.metric);
            let h: Vec<f64> = sel.iter().map(|r| r.hausdorff * scale).collect();
            let m: Vec<f64> = sel.iter().map(|r| r.nn_max_red * scale).collect();
            RateRow { n, hausdorff_median: median(&h), nn_max_median: median(&m) }
        })
        .collect();
    Ok(RateStatistics {
        hausdorff_band_ratio: band(rows.iter().map(|r| r.hausdorff_median)),
        nn_max_band_ratio: band(rows.iter().map(|r| r.nn_max_median)),
        rows,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub mean: f64,
    /// Standard deviation over mean of the normalized cost.
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationScan {
    pub rows: Vec<ConcentrationRow>,
    pub inversions: usize,
    /// At most one inversion.
    pub decreasing: bool,
    /// Final relative deviation below half the initial one.
    pub halved: bool,
    /// Whether `(d, p)` lies where almost sure convergence is known:
    /// `p < d/2` for `d <= 2`, `p < d` for `d >= 3`.
    pub in_regime: bool,
    pub records: Vec<ExperimentRecord>,
}

/// Relative spread of the normalized cost per `n`.
pub fn concentration_scan(plan: &ExperimentPlan) -> Result<ConcentrationScan> {
    if plan.n_schedule.len() < 2 {
        return Err(Error::InvalidParameter("trend needs at least two schedule points".into()));
    }
    if plan.trials < 2 {
        return Err(Error::InvalidParameter("spread needs at least two trials".into()));
    }
    let records = run_records(plan, &[plan.metric], plan.timing)?;
    let rows: Vec<ConcentrationRow> = plan
        .n_schedule
        .iter()
        .map(|&n| {
            let xs: Vec<f64> = select(&records, n, plan.metric).iter().map(|r| r.normalized_cost).collect();
            ConcentrationRow { n, mean: mean_se(&xs).0, relative_deviation: relative_deviation(&xs) }
        })
        .collect();
    let devs: Vec<f64> = rows.iter().map(|r| r.relative_deviation).collect();
    let inv = inversions(&devs);
    let d = plan.d as f64;
    Ok(ConcentrationScan {
        inversions: inv,
        decreasing: inv <= 1,
        halved: devs[devs.len() - 1] < devs[0] / 2.0,
        in_regime: if plan.d <= 2 { plan.p < d / 2.0 } else { plan.p < d },
        rows,
        records,
    })
}
