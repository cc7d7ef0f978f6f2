//! Spectral variance estimator properties checked against independent
//! oracles.

mod common;

use common::{autocovariance_oracle, quadratic_form_variance};
use esvm_core::{
    make_lag_window, sample_autocovariance, sample_mean, spectral_variance, stream_rng,
};
use rand::Rng;
use rand_distr::StandardNormal;

#[test]
fn autocovariance_matches_direct_summation() {
    let mut rng = stream_rng(71, 0x41434f56);
    for _ in 0..25 {
        let n = rng.random_range(8..400);
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        for _ in 0..8 {
            let lag = rng.random_range(0..n);
            let got = sample_autocovariance(&xs, lag as isize).unwrap();
            let want = autocovariance_oracle(&xs, lag);
            assert!((got - want).abs() <= 1e-13, "lag {lag} n {n}");
        }
    }
}

#[test]
fn spectral_variance_matches_dense_quadratic_form() {
    let mut rng = stream_rng(72, 0x51464f524d);
    for case in 0..50 {
        let n = rng.random_range(16..=256);
        let b = rng.random_range(2..=(n / 2).max(2));
        let xs: Vec<f64> = (0..n)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0 + 0.5)
            .collect();
        let window = make_lag_window(b).unwrap();
        let fast = spectral_variance(&xs, &window).unwrap();
        let dense = quadratic_form_variance(&xs, &window);
        let scale = fast.abs().max(dense.abs()).max(1e-30);
        assert!(
            (fast - dense).abs() <= 1e-10 * scale,
            "case {case}: n={n} b={b} fast={fast} dense={dense}"
        );
    }
}

#[test]
fn spectral_variance_is_shift_invariant() {
    let mut rng = stream_rng(73, 0x5348494654);
    let xs: Vec<f64> = (0..300).map(|_| rng.random_range(-1.0..1.0)).collect();
    let window = make_lag_window(24).unwrap();
    let base = spectral_variance(&xs, &window).unwrap();
    for shift in [1.0, -7.5, 1e4] {
        let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let v = spectral_variance(&shifted, &window).unwrap();
        assert!((v - base).abs() <= 1e-10 * base.abs().max(1.0));
    }
}

#[test]
fn spectral_variance_scales_quadratically() {
    let mut rng = stream_rng(74, 0x5343414c45);
    let xs: Vec<f64> = (0..300).map(|_| rng.random_range(-1.0..1.0)).collect();
    let window = make_lag_window(16).unwrap();
    let base = spectral_variance(&xs, &window).unwrap();
    for a in [2.0, -3.0, 0.125] {
        let scaled: Vec<f64> = xs.iter().map(|x| a * x).collect();
        let v = spectral_variance(&scaled, &window).unwrap();
        assert!((v - a * a * base).abs() <= 1e-10 * (a * a * base).abs().max(1e-12));
    }
}

#[test]
fn iid_normal_spectral_variance_is_near_one() {
    let mut rng = stream_rng(75, 0x494944);
    let xs: Vec<f64> = (0..50_000).map(|_| rng.sample(StandardNormal)).collect();
    let window = make_lag_window(50).unwrap();
    let v = spectral_variance(&xs, &window).unwrap();
    assert!((0.85..1.15).contains(&v), "V = {v}");
    assert!(v >= 0.0);
}

#[test]
fn mean_handles_large_series_with_compensation() {
    let xs = vec![0.1_f64; 1_000_000];
    let m = sample_mean(&xs).unwrap();
    assert!((m - 0.1).abs() <= 1e-12);
}
