//! Statistical behavior of the simulators and the end-to-end pipeline:
//! marginal distributions, sanity of θ estimates on processes with known θ,
//! and the plateau baseline. Seeds are fixed; every check is deterministic.

use exindex::selection::{default_levels, plateau_a1, run_algorithm, Mode, SelectionConfig};
use exindex::simulate::{simulate, Marginal, ProcessSpec};
use exindex::{intervals_estimator, GapSample, TimeSeries};

/// One-sample Kolmogorov–Smirnov statistic sup|F_n − F|.
fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((f - i as f64 / n).abs());
    }
    d
}

/// Asymptotic Kolmogorov critical value at significance 0.01.
fn ks_crit_01(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

fn frechet_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

#[test]
fn armax_marginal_is_standard_frechet() {
    let spec = ProcessSpec::Armax { alpha: 0.75 };
    let series = simulate::<f64>(&spec, 10_000, 20260819).unwrap();
    let d = ks_statistic(series.values(), frechet_cdf);
    assert!(d < ks_crit_01(10_000), "KS statistic {d} too large");
}

#[test]
fn armax_without_memory_is_iid_frechet() {
    let spec = ProcessSpec::Armax { alpha: 0.0 };
    let series = simulate::<f64>(&spec, 10_000, 31).unwrap();
    let d = ks_statistic(series.values(), frechet_cdf);
    assert!(d < ks_crit_01(10_000), "KS statistic {d} too large");
}

#[test]
fn ar_uniform_marginal_has_the_uniform_mean() {
    let spec = ProcessSpec::ArUniformPlus { r: 2 };
    let series = simulate::<f64>(&spec, 100_000, 11).unwrap();
    let mean: f64 = series.values().iter().sum::<f64>() / series.len() as f64;
    assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    assert!(series.values().iter().all(|&x| (0.0..=1.0).contains(&x)));
}

#[test]
fn garch_paths_stay_finite_at_scale() {
    let series = simulate::<f64>(&ProcessSpec::garch11(), 100_000, 5).unwrap();
    assert!(series.values().iter().all(|x| x.is_finite()));
}

#[test]
fn iid_data_reads_as_unclustered_in_most_replications() {
    let spec = ProcessSpec::Iid { marginal: Marginal::Frechet };
    let mut hits = 0;
    let reps = 200;
    for rep in 0..reps {
        let series = simulate::<f64>(&spec, 10_000, 9_000 + rep).unwrap();
        let u = series.quantile_threshold(0.95).unwrap();
        let g = GapSample::from_series(&series, u).unwrap();
        let est = intervals_estimator(&g).unwrap();
        if est.value >= 0.85 {
            hits += 1;
        }
    }
    assert!(hits * 100 >= reps * 95, "only {hits}/{reps} replications at θ̂ ≥ 0.85");
}

#[test]
fn threshold_selection_brackets_the_armax_index() {
    // ARMAX with θ = 1 − α = 0.75
    let spec = ProcessSpec::Armax { alpha: 0.25 };
    let series = simulate::<f64>(&spec, 100_000, 77).unwrap();
    let cfg = SelectionConfig { mode: Mode::Inequality, ..SelectionConfig::default() };
    let result = run_algorithm(&series, &cfg).unwrap();
    let t1 = result.theta1.unwrap();
    assert!((0.60..=0.90).contains(&t1), "θ̂₁ = {t1}");
}

#[test]
fn threshold_selection_sees_iid_exponential_as_unclustered() {
    let spec = ProcessSpec::Iid { marginal: Marginal::Exponential };
    let series = simulate::<f64>(&spec, 100_000, 13).unwrap();
    let cfg = SelectionConfig { mode: Mode::Inequality, ..SelectionConfig::default() };
    let result = run_algorithm(&series, &cfg).unwrap();
    let t1 = result.theta1.unwrap();
    assert!(t1 >= 0.9, "θ̂₁ = {t1}");
}

#[test]
fn too_short_series_yields_no_solutions() {
    let series = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
    let cfg = SelectionConfig::default();
    assert!(run_algorithm(&series, &cfg).is_err());
}

#[test]
fn plateau_baseline_recovers_a_strongly_clustered_index() {
    // ARMAX with θ = 1 − α = 0.25
    let spec = ProcessSpec::Armax { alpha: 0.75 };
    let series = simulate::<f64>(&spec, 100_000, 8).unwrap();
    let est = plateau_a1(&series, &default_levels(), 0.25).unwrap();
    assert!((est.value - 0.25).abs() <= 0.06, "plateau estimate {}", est.value);
}
