use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, OrderStatistics, Statistics};

pub fn median(xs: &[f64]) -> f64 {
    Data::new(xs.to_vec()).median()
}

/// Mean and its standard error (sample standard deviation over `sqrt(n)`;
/// zero for a single value).
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let mean = xs.mean();
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    (mean, xs.std_dev() / (xs.len() as f64).sqrt())
}

/// Sample standard deviation divided by the mean.
pub fn relative_deviation(xs: &[f64]) -> f64 {
    xs.std_dev() / xs.mean()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn line_fit(x: &[f64], y: &[f64]) -> LineFit {
    let mx = x.mean();
    let my = y.mean();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LineFit {
        intercept: my - slope * mx,
        slope,
        r_squared,
    }
}

/// Number of adjacent pairs that go up in a sequence expected to decrease.
pub fn inversions(xs: &[f64]) -> usize {
    xs.windows(2).filter(|w| w[1] > w[0]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        let (m, se) = mean_se(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let f = line_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(inversions(&[3.0, 2.0, 2.5, 1.0]), 1);
    }
}
