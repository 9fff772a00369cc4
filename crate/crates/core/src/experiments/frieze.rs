use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::mean_se;
use crate::error::{Error, Result};
use crate::mst::{kruskal, WeightedGraph};
use crate::rng::substream;

/// `ζ(3)`, the limit of the MST cost of `K_n` with uniform weights.
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriezeResult {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub std_error: f64,
    pub costs: Vec<f64>,
}

/// Mean MST cost of the complete graph `K_n` with i.i.d. uniform(0,1)
/// weights; trial `i` draws from substream `i` of `seed`.
pub fn frieze_calibration(n: usize, trials: usize, seed: u64) -> Result<FriezeResult> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: n });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let costs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = substream(seed, t as u64);
            let g = WeightedGraph::complete(n, |_, _| rng.random::<f64>())?;
            Ok(kruskal(&g)?.0.cost(1.0))
        })
        .collect::<Result<_>>()?;
    let (mean, std_error) = mean_se(&costs);
    Ok(FriezeResult {
        n,
        trials,
        mean,
        std_error,
        costs,
    })
}
