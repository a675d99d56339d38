mod common;

use common::*;
use lanczos_trace::oracles::{exact_bilinear_laplacian, DenseSpectral, LaplacianSpectrum};
use lanczos_trace::trace::*;
use lanczos_trace::{rational, FunctionKind, Laplacian2D, LanczosConfig, ReorthMode};
use proptest::prelude::*;

#[test]
fn rademacher_entries_balance() {
    let n = 100_000;
    let mean: f64 = (0..30).flat_map(|i| rademacher_vector(n, 77, i)).sum::<f64>() / (30 * n) as f64;
    assert!(mean.abs() <= 4.0 / ((30 * n) as f64).sqrt());
}

#[test]
fn hutchinson_sampler_is_unbiased() {
    let n = 6;
    let (data, eig) = random_spd(n, 5, 0.5, 3.0);
    let trace: f64 = eig.iter().sum();
    let draws = 100_000u64;
    let samples: Vec<f64> = (0..draws)
        .map(|i| {
            let u = rademacher_vector(n, 1, i);
            (0..n).map(|r| u[r] * (0..n).map(|c| data[r * n + c] * u[c]).sum::<f64>()).sum()
        })
        .collect();
    let (mean, std) = mean_and_std(&samples);
    assert!((mean - trace).abs() <= 4.0 * std / (draws as f64).sqrt(), "{mean} vs {trace}");
}

#[test]
fn estimate_fields_are_recomputable() {
    let op = Laplacian2D::new(30, 20).unwrap();
    let cfg = TraceConfig { samples: 25, delta: 0.5, seed: 3, interval: Some(LaplacianSpectrum::new(30, 20).interval()), ..Default::default() };
    let est = estimate_trace(&op, FunctionKind::Sqrt, &cfg).unwrap();
    let values: Vec<f64> = est.per_sample.iter().map(|r| r.value).collect();
    let (mean, std) = mean_and_std(&values);
    assert!((mean - est.mean).abs() <= 1e-14 * mean.abs());
    assert!((std - est.std_err).abs() <= 1e-14 * std);
    assert_eq!(est.half_width, confidence_half_width(est.std_err, est.samples, est.delta, est.alpha).unwrap());
    for r in &est.per_sample {
        assert!(r.converged && r.retired < r.steps && r.value.is_finite());
    }
    let again = estimate_trace(&op, FunctionKind::Sqrt, &cfg).unwrap();
    assert_eq!(values, again.per_sample.iter().map(|r| r.value).collect::<Vec<_>>());
}

#[test]
fn exp_step_count_on_medium_grid() {
    let (n1, n2) = (300, 400);
    let op = Laplacian2D::new(n1, n2).unwrap();
    let cfg = TraceConfig { samples: 20, delta: 26.1, interval: Some(LaplacianSpectrum::new(n1, n2).interval()), ..Default::default() };
    let est = estimate_trace(&op, FunctionKind::ExpNeg, &cfg).unwrap();
    assert!((est.mean_retired - 5.0).abs() <= 2.0, "{}", est.mean_retired);
}

#[test]
fn log_samples_meet_tolerance_on_medium_grid() {
    let (n1, n2) = (300, 400);
    let op = Laplacian2D::new(n1, n2).unwrap();
    let delta = 120.0;
    let r = select_approximant(FunctionKind::Log, LaplacianSpectrum::new(n1, n2).interval(), delta, n1 * n2, None).unwrap();
    let lanczos = LanczosConfig::new(ReorthMode::Full, 400);
    let mut within = 0;
    for i in 0..100 {
        let u = rademacher_vector(n1 * n2, 8, i);
        let rec = sample_bilinear(&op, FunctionKind::Log, &r, &u, delta, 0.1, lanczos).unwrap();
        let exact = exact_bilinear_laplacian(|x| Ok(x.ln()), n1, n2, &u).unwrap();
        if (exact - rec.value).abs() <= 3.0 * delta {
            within += 1;
        }
    }
    assert!(within >= 95, "{within}/100");
}

#[test]
fn calibrated_delta_matches_reference_scale() {
    let op = Laplacian2D::new(90, 120).unwrap();
    let cfg = TraceConfig { interval: Some(LaplacianSpectrum::new(90, 120).interval()), ..Default::default() };
    let cal = calibrate_delta(&op, FunctionKind::ExpNeg, 20, 1.0, &cfg).unwrap();
    assert!(cal.delta / 8.31 < 3.0 && 8.31 / cal.delta < 3.0, "{}", cal.delta);
}

#[test]
fn partial_and_full_reorthogonalization_agree() {
    let (n1, n2) = (60, 80);
    let op = Laplacian2D::new(n1, n2).unwrap();
    let r = rational::build_log(12, LaplacianSpectrum::new(n1, n2).interval()).unwrap();
    let u = rademacher_vector(n1 * n2, 4, 0);
    let full = sample_bilinear(&op, FunctionKind::Log, &r, &u, 1e-3, 0.1, LanczosConfig::new(ReorthMode::Full, 500)).unwrap();
    let part = sample_bilinear(&op, FunctionKind::Log, &r, &u, 1e-3, 0.1, LanczosConfig::new(ReorthMode::Partial, 500)).unwrap();
    assert!((full.value - part.value).abs() <= 2e-3);
    assert!(part.reorth_steps < full.reorth_steps);
}

#[test]
fn dense_matrix_sample_within_tolerance() {
    let n = 40;
    let (data, _) = random_spd(n, 9, 0.01, 10.0);
    let op = lanczos_trace::operators::DenseSymmetric::new(n, data.clone()).unwrap();
    let oracle = DenseSpectral::new(n, &data).unwrap();
    let r = rational::build_sqrt(12, [0.009, 10.1]).unwrap();
    let u = rademacher_vector(n, 1, 0);
    let rec = sample_bilinear(&op, FunctionKind::Sqrt, &r, &u, 1e-4, 0.1, LanczosConfig::new(ReorthMode::Full, n)).unwrap();
    let exact = oracle.bilinear(&u, |x| Ok(x.sqrt())).unwrap();
    assert!((exact - rec.value).abs() <= 3e-4);
}

proptest! {
    #[test]
    fn half_width_monotone(s in 0.0f64..100.0, delta in 0.0f64..10.0, alpha in 0.1f64..5.0, n in 2usize..1000, bump in 0.0f64..2.0) {
        let h = confidence_half_width(s, n, delta, alpha).unwrap();
        prop_assert!(confidence_half_width(s + bump, n, delta, alpha).unwrap() >= h);
        prop_assert!(confidence_half_width(s, n, delta + bump, alpha).unwrap() >= h);
        prop_assert!(confidence_half_width(s, n, delta, alpha + bump).unwrap() >= h);
        prop_assert!(confidence_half_width(s, n + 1 + bump as usize, delta, alpha).unwrap() <= h);
    }

    #[test]
    fn planning_bound_dominates_when_delta_is_small(s in 0.01f64..100.0, n in 2usize..1000, alpha in 0.5f64..5.0, beta in 0.01f64..2.0, frac in 0.0f64..1.0) {
        let delta = frac * beta * alpha * s / (n as f64).sqrt();
        let h = confidence_half_width(s, n, delta, alpha).unwrap();
        prop_assert!(h <= planning_half_width(s, n, alpha, beta).unwrap() * (1.0 + 1e-14));
    }
}
