use bmst::beta::{estimate_beta, estimate_e, BetaOptions, estimate_beta_with, SeriesForm};
use bmst::experiments::{direct_beta, frieze_calibration, ZETA3};

#[test]
fn term_color_swap_symmetry() {
    for (kr, kb, a) in [(1, 2, 0.3), (2, 1, 0.6), (2, 2, 0.4)] {
        let x = estimate_e(kr, kb, a, 2, 40_000, 1).unwrap();
        let y = estimate_e(kb, kr, 1.0 - a, 2, 40_000, 2).unwrap();
        let se = x.std_error.hypot(y.std_error);
        assert!((x.e - y.e).abs() <= 3.0 * se, "{x:?} vs {y:?}");
    }
}

#[test]
fn series_is_symmetric_in_the_colors() {
    let a = estimate_beta(1, 0.5, 0.3, 5, 20_000, 3).unwrap();
    let b = estimate_beta(1, 0.5, 0.7, 5, 20_000, 4).unwrap();
    let se = a.std_error.hypot(b.std_error);
    assert!((a.value - b.value).abs() <= 3.0 * se + 1e-12, "{} vs {}", a.value, b.value);
}

#[test]
fn series_forms_disagree() {
    let mut opts = BetaOptions::new(1, 0.5, 0.5);
    opts.k_max = 4;
    opts.samples = 20_000;
    let rederived = estimate_beta_with(&opts).unwrap();
    opts.form = SeriesForm::Printed;
    let printed = estimate_beta_with(&opts).unwrap();
    assert!(rederived.value > 2.0 * printed.value, "{} vs {}", rederived.value, printed.value);
}

#[test]
fn direct_estimate_is_symmetric_in_the_colors() {
    let sched = [512, 1024, 2048, 4096];
    let a = direct_beta(1, 0.5, 0.3, &sched, 20, 5).unwrap();
    let b = direct_beta(1, 0.5, 0.7, &sched, 20, 6).unwrap();
    // the extrapolation error is larger than the fit's standard error
    let spread = |r: &bmst::experiments::DirectBeta| r.rows.iter().map(|x| x.std_error).fold(r.std_error, f64::max);
    let se = spread(&a).hypot(spread(&b));
    assert!((a.value - b.value).abs() <= 3.0 * se, "{} vs {} (se {se})", a.value, b.value);
}

#[test]
fn complete_graph_means_near_the_limit() {
    for (i, n) in [50, 100, 200].into_iter().enumerate() {
        let r = frieze_calibration(n, 200, 70 + i as u64).unwrap();
        assert!((r.mean - ZETA3).abs() / ZETA3 <= 0.05, "n = {n}: {}", r.mean);
    }
    assert_eq!(frieze_calibration(100, 30, 9).unwrap(), frieze_calibration(100, 30, 9).unwrap());
}
