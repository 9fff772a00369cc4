//! Monte Carlo evaluation of the series for the limit constant of the
//! normalized bipartite MST cost.

mod series;
mod term;
mod theta;
mod volume;

pub use series::{estimate_beta, estimate_beta_with, BetaEstimate, BetaOptions, SeriesForm, SeriesTerm};
pub use term::{
    estimate_e, estimate_e_with, SeriesTermEstimate, TermOptions, DEFAULT_INNER_SAMPLES,
    UNRELIABLE_ACCEPTANCE,
};
pub use theta::{theta_membership, Configuration, Pinned};
pub use volume::union_ball_volume;
