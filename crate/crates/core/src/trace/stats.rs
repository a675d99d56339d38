use crate::error::{contract, Result};

/// `erf(x)` by the Abramowitz–Stegun 7.1.26 rational approximation (|error| <= 1.5e-7).
pub fn erf(x: f64) -> f64 {
    const P: f64 = 0.327_591_1;
    const A: [f64; 5] = [0.254_829_592, -0.284_496_736, 1.421_413_741, -1.453_152_027, 1.061_405_429];
    let s = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + P * x);
    let poly = t * (A[0] + t * (A[1] + t * (A[2] + t * (A[3] + t * A[4]))));
    s * (1.0 - poly * (-x * x).exp())
}

/// Coverage probability `erf(α/√2)` of an `α`-standard-error interval.
pub fn p_alpha(alpha: f64) -> f64 {
    erf(alpha / std::f64::consts::SQRT_2).max(0.0)
}

/// `(α/√N)(s + δ√(N/(N-1))) + δ`.
pub fn confidence_half_width(s: f64, n: usize, delta: f64, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(contract(format!("confidence interval needs N >= 2, got {n}")));
    }
    if !(s >= 0.0 && delta >= 0.0 && alpha > 0.0) {
        return Err(contract("confidence interval needs s >= 0, delta >= 0, alpha > 0"));
    }
    let nf = n as f64;
    Ok(alpha / nf.sqrt() * (s + delta * (nf / (nf - 1.0)).sqrt()) + delta)
}

/// Planning bound `(αs/√N)(1 + β + βα/√(N-1))`, valid when `δ <= βαs/√N`.
pub fn planning_half_width(s: f64, n: usize, alpha: f64, beta: f64) -> Result<f64> {
    if n < 2 {
        return Err(contract(format!("confidence interval needs N >= 2, got {n}")));
    }
    let nf = n as f64;
    Ok(alpha * s / nf.sqrt() * (1.0 + beta + beta * alpha / (nf - 1.0).sqrt()))
}

/// Sample mean and standard deviation (`N - 1` denominator), summed in index order.
pub fn mean_and_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_alpha_values() {
        assert!((p_alpha(3.0) - 0.9973).abs() < 5e-5);
        assert!((p_alpha(1.96) - 0.95).abs() < 1e-4);
        assert!(p_alpha(1e-12) < 1e-6);
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1.5e-7);
        assert!((erf(-0.5) + 0.520_499_877_813_046_5).abs() < 1.5e-7);
    }

    #[test]
    fn half_width_examples() {
        assert!((confidence_half_width(1.0, 100, 0.0, 3.0).unwrap() - 0.3).abs() < 1e-15);
        let h = confidence_half_width(2.0, 100, 0.5, 3.0).unwrap();
        let hand = 0.3 * (2.0 + 0.5 * (100.0f64 / 99.0).sqrt()) + 0.5;
        assert_eq!(h, hand);
        assert!((h - 1.2508).abs() < 1e-4);
        assert!(confidence_half_width(1.0, 1, 0.0, 3.0).is_err());

        let bound = planning_half_width(1.0, 100, 3.0, 0.1).unwrap();
        assert!((bound - 0.339_04).abs() < 1e-5);
        let delta = 0.1 * 3.0 * 1.0 / 10.0;
        assert!(confidence_half_width(1.0, 100, delta, 3.0).unwrap() <= bound + 1e-15);
    }

    #[test]
    fn half_width_is_monotone() {
        let base = confidence_half_width(1.0, 50, 0.2, 2.0).unwrap();
        assert!(confidence_half_width(1.5, 50, 0.2, 2.0).unwrap() >= base);
        assert!(confidence_half_width(1.0, 50, 0.3, 2.0).unwrap() >= base);
        assert!(confidence_half_width(1.0, 50, 0.2, 2.5).unwrap() >= base);
        assert!(confidence_half_width(1.0, 80, 0.2, 2.0).unwrap() <= base);
    }
}
