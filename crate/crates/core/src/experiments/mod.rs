//! Monte Carlo drivers for the asymptotic statements: degree growth, cost
//! scaling, direct plateau estimation, rates, occupancy tails,
//! concentration, and the complete-graph calibration.

mod direct;
mod frieze;
mod plan;
mod scans;
mod stats;
mod tail;

pub use direct::{direct_beta, DirectBeta, PlateauRow};
pub use frieze::{frieze_calibration, FriezeResult, ZETA3};
pub use plan::{color_split, run_records, run_trial, trial_seed, ExperimentPlan, ExperimentRecord};
pub use scans::{
    concentration_scan, degree_scan, rate_statistics, scaling_scan, ConcentrationRow, ConcentrationScan, DegreeRow,
    DegreeScan, RateRow, RateStatistics, ScalingRow, ScalingScan,
};
pub use stats::{inversions, line_fit, mean_se, median, relative_deviation, LineFit};
pub use tail::{occupancy_tail_check, tail_rate, TailCheck, TailSide};
