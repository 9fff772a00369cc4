use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hausdorff, nn_max, sample_uniform, MetricKind};
use crate::mst::{bipartite_mst, Solver};
use crate::rng::derive_seed;

/// Parameters shared by the experiment drivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub experiment: String,
    /// Strictly increasing total point counts.
    pub n_schedule: Vec<usize>,
    pub d: usize,
    pub p: f64,
    pub alpha_r: f64,
    pub metric: MetricKind,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Fill `wall_time` in records.
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentPlan {
    pub fn new(experiment: &str, n_schedule: Vec<usize>, d: usize, p: f64, alpha_r: f64, trials: usize, seed: u64) -> Self {
        ExperimentPlan {
            experiment: experiment.to_string(),
            n_schedule,
            d,
            p,
            alpha_r,
            metric: MetricKind::UnitCube,
            trials,
            seed,
            output: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_schedule.is_empty() {
            return Err(Error::InvalidParameter("empty n schedule".into()));
        }
        if self.n_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("n schedule must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.alpha_r > 0.0 && self.alpha_r < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha_R must lie in (0, 1), got {}", self.alpha_r)));
        }
        if self.d == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if !(self.p > 0.0) {
            return Err(Error::InvalidParameter(format!("exponent must be positive, got {}", self.p)));
        }
        for &n in &self.n_schedule {
            color_split(n, self.alpha_r)?;
        }
        Ok(())
    }

    /// `n^{1 - p/d}`.
    pub fn rate(&self, n: usize) -> f64 {
        (n as f64).powf(1.0 - self.p / self.d as f64)
    }
}

/// `(n_R, n_B)` with `n_R = round(α_R n)`; both must be positive.
pub fn color_split(n: usize, alpha_r: f64) -> Result<(usize, usize)> {
    let n_r = (alpha_r * n as f64).round() as usize;
    if n_r == 0 || n_r >= n {
        return Err(Error::InvalidParameter(format!(
            "n = {n} with alpha_R = {alpha_r} leaves a color class empty"
        )));
    }
    Ok((n_r, n - n_r))
}

/// One solved instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub n: usize,
    pub n_r: usize,
    pub n_b: usize,
    pub d: usize,
    pub p: f64,
    pub alpha_r: f64,
    pub metric: MetricKind,
    pub trial: usize,
    pub seed: u64,
    pub cost_p: f64,
    /// `cost_p / n^{1 - p/d}`.
    pub normalized_cost: f64,
    pub max_degree: u32,
    pub bottleneck: f64,
    pub hausdorff: f64,
    /// Largest nearest-neighbor distance among red points (0 with one red
    /// point).
    pub nn_max_red: f64,
    /// Seconds spent solving; only filled when timing is requested, since it
    /// would otherwise make outputs differ between runs.
    pub wall_time: Option<f64>,
}

/// FNV-1a hash of the experiment id, used as the first seed path element.
fn id_hash(id: &str) -> u64 {
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of one trial; depends only on the experiment id, master seed, `n`
/// and the trial index.
pub fn trial_seed(plan: &ExperimentPlan, n: usize, trial: usize) -> u64 {
    derive_seed(plan.seed, &[id_hash(&plan.experiment), n as u64, trial as u64])
}

/// Samples and solves one trial under `metric`.
pub fn run_trial(plan: &ExperimentPlan, n: usize, trial: usize, metric: MetricKind, timing: bool) -> Result<ExperimentRecord> {
    let (n_r, n_b) = color_split(n, plan.alpha_r)?;
    let seed = trial_seed(plan, n, trial);
    let inst = sample_uniform(n_r, n_b, plan.d, metric, seed)?;
    let start = Instant::now();
    let tree = bipartite_mst(&inst, Solver::GridBoruvka)?;
    let elapsed = start.elapsed().as_secs_f64();
    let cost_p = tree.cost(plan.p);
    Ok(ExperimentRecord {
        experiment: plan.experiment.clone(),
        n,
        n_r,
        n_b,
        d: plan.d,
        p: plan.p,
        alpha_r: plan.alpha_r,
        metric,
        trial,
        seed,
        cost_p,
        normalized_cost: cost_p / plan.rate(n),
        max_degree: tree.max_degree(),
        bottleneck: tree.bottleneck(),
        hausdorff: hausdorff(&inst.red, &inst.blue, metric)?,
        nn_max_red: if n_r >= 2 { nn_max(&inst.red, metric)? } else { 0.0 },
        wall_time: timing.then_some(elapsed),
    })
}

/// All trials of the plan for each metric, ordered by metric, `n`, trial.
/// Trials of one `n` share their points across metrics.
pub fn run_records(plan: &ExperimentPlan, metrics: &[MetricKind], timing: bool) -> Result<Vec<ExperimentRecord>> {
    plan.validate()?;
    let jobs: Vec<(MetricKind, usize, usize)> = metrics
        .iter()
        .flat_map(|&m| {
            plan.n_schedule
                .iter()
                .flat_map(move |&n| (0..plan.trials).map(move |t| (m, n, t)))
        })
        .collect();
    jobs.par_iter()
        .map(|&(m, n, t)| run_trial(plan, n, t, m, timing))
        .collect()
}

/// Records with the given `n` and metric.
pub(crate) fn select(records: &[ExperimentRecord], n: usize, metric: MetricKind) -> Vec<&ExperimentRecord> {
    records.iter().filter(|r| r.n == n && r.metric == metric).collect()
}
