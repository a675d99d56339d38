//! Rational approximants `r(x) = C + Re Σ_k c_k / (x - z_k)` of the supported functions.
//!
//! Conjugate pole pairs are stored once with a doubled coefficient, so the real part of
//! the sum equals the full conjugate-symmetric sum.

mod contour;
pub mod elliptic;
mod exp_table;

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::function::FunctionKind;

/// Largest `K` tried by [`choose_k`].
pub const K_MAX: usize = 40;
/// Interior Chebyshev points used by [`uniform_error`].
pub const ERROR_SAMPLES: usize = 10_000;
const PARABOLIC_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Best uniform approximation of `exp(-x)` on `[0, ∞)` from the embedded table.
    BestUniform,
    /// Parabolic Talbot-type contour with `terms` retained poles.
    ParabolicContour { terms: usize },
    /// Conformal map of an annulus, applied in the `z` plane.
    AnnulusMap,
    /// Conformal map of an annulus, applied in the `√z` plane.
    AnnulusMapSqrtPlane,
    /// Elliptic substitution in the integral representation of `√x`.
    EllipticSubstitution,
    /// Pole-free constant.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalApproximant {
    kind: FunctionKind,
    interval: [f64; 2],
    k: usize,
    poles: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    constant: f64,
    eps: f64,
    construction: Construction,
}

impl RationalApproximant {
    /// Assembles and validates an approximant; `eps` is measured on `interval`.
    pub fn from_parts(
        kind: FunctionKind,
        interval: [f64; 2],
        k: usize,
        poles: Vec<Complex64>,
        coeffs: Vec<Complex64>,
        constant: f64,
        construction: Construction,
    ) -> Result<Self> {
        let mut r = Self { kind, interval, k, poles, coeffs, constant, eps: 0.0, construction };
        r.validate()?;
        r.eps = uniform_error(&r, |x| kind.eval(x))?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let [a, b] = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b && a >= 0.0) {
            return Err(contract(format!("invalid interval [{a}, {b}]")));
        }
        if self.poles.len() != self.coeffs.len() {
            return Err(contract("poles and coefficients differ in length"));
        }
        if self.poles.iter().chain(&self.coeffs).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("non-finite pole or coefficient".into()));
        }
        if self.pole_distance() <= 0.0 {
            return Err(contract(format!("a pole lies on the interval [{a}, {b}]")));
        }
        Ok(())
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }
    pub fn interval(&self) -> [f64; 2] {
        self.interval
    }
    /// Requested number of quadrature points.
    pub fn k(&self) -> usize {
        self.k
    }
    /// Number of stored terms (equals `k` except on the parabolic fallback path).
    pub fn terms(&self) -> usize {
        self.poles.len()
    }
    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
    pub fn constant(&self) -> f64 {
        self.constant
    }
    /// Uniform error recorded at construction.
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// Minimum distance from any pole to the interval (`∞` without poles).
    pub fn pole_distance(&self) -> f64 {
        let [a, b] = self.interval;
        self.poles
            .iter()
            .map(|z| (z - Complex64::new(z.re.clamp(a, b), 0.0)).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `C + Re Σ c_k / (x - z_k)`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let mut acc = self.constant;
        for (z, c) in self.poles.iter().zip(&self.coeffs) {
            let d = Complex64::new(x - z.re, -z.im);
            if d.re == 0.0 && d.im == 0.0 {
                return Err(Error::PoleEvaluation { x });
            }
            acc += (c / d).re;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s)?;
        r.validate()?;
        Ok(r)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn check_positive_interval(interval: [f64; 2]) -> Result<()> {
    let [a, b] = interval;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(contract(format!("interval [{a}, {b}] must satisfy 0 < a < b")));
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > K_MAX {
        return Err(Error::Unsupported(format!("K = {k} (supported 1..={K_MAX})")));
    }
    Ok(())
}

/// `exp(-x)` on `x >= 0`: best-uniform table for `K <= 8`, parabolic contour beyond.
pub fn build_exp(k: usize, interval: [f64; 2]) -> Result<RationalApproximant> {
    check_k(k)?;
    let to_c = |v: &[(f64, f64)]| v.iter().map(|&(re, im)| Complex64::new(re, im)).collect::<Vec<_>>();
    let (poles, coeffs, construction) = if let Some((p, c)) = exp_table::EXP_NEG.get(k - 1) {
        (to_c(p), to_c(c), Construction::BestUniform)
    } else {
        // Degree-2K best approximants are already at roundoff for K = 8; the contour needs
        // about 1.64x as many terms for the same accuracy.
        let terms = ((1.64 * k as f64).ceil() as usize).min(PARABOLIC_CAP);
        let (p, c, _) = contour::parabolic_exp_neg(terms);
        (p, c, Construction::ParabolicContour { terms })
    };
    RationalApproximant::from_parts(FunctionKind::ExpNeg, interval, k, poles, coeffs, 0.0, construction)
}

/// `√x` on `[a, b]`, `a > 0`; negative real poles.
pub fn build_sqrt(k: usize, interval: [f64; 2]) -> Result<RationalApproximant> {
    check_k(k)?;
    check_positive_interval(interval)?;
    let (p, c, constant) = contour::method3_sqrt(interval[0], interval[1], k);
    RationalApproximant::from_parts(
        FunctionKind::Sqrt,
        interval,
        k,
        p,
        c,
        constant,
        Construction::EllipticSubstitution,
    )
}

/// `log x` on `[a, b]`, `a > 0`.
pub fn build_log(k: usize, interval: [f64; 2]) -> Result<RationalApproximant> {
    check_k(k)?;
    check_positive_interval(interval)?;
    let (p, c, constant) = contour::method2_times_x(interval[0], interval[1], k, |w| 2.0 * w.ln() / (w * w));
    RationalApproximant::from_parts(FunctionKind::Log, interval, k, p, c, constant, Construction::AnnulusMapSqrtPlane)
}

/// `tanh(√x)` on `[a, b]`, `a > 0`.
pub fn build_tanh_sqrt(k: usize, interval: [f64; 2]) -> Result<RationalApproximant> {
    check_k(k)?;
    check_positive_interval(interval)?;
    let (p, c, constant) = contour::method1_times_x(interval[0], interval[1], k, |z| z.sqrt().tanh() / z);
    RationalApproximant::from_parts(FunctionKind::TanhSqrt, interval, k, p, c, constant, Construction::AnnulusMap)
}

/// Pole-free approximant of a constant function.
pub fn build_constant(value: f64, interval: [f64; 2]) -> Result<RationalApproximant> {
    RationalApproximant::from_parts(
        FunctionKind::Constant(value),
        interval,
        0,
        Vec::new(),
        Vec::new(),
        value,
        Construction::Constant,
    )
}

pub fn build(kind: FunctionKind, k: usize, interval: [f64; 2]) -> Result<RationalApproximant> {
    match kind {
        FunctionKind::ExpNeg => build_exp(k, interval),
        FunctionKind::Sqrt => build_sqrt(k, interval),
        FunctionKind::Log => build_log(k, interval),
        FunctionKind::TanhSqrt => build_tanh_sqrt(k, interval),
        FunctionKind::Constant(c) => build_constant(c, interval),
    }
}

/// `[a, b]` plus `n` Chebyshev points of the first kind.
pub fn chebyshev_samples(interval: [f64; 2], n: usize) -> Vec<f64> {
    let [a, b] = interval;
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut xs = vec![a, b];
    xs.extend((0..n).map(|j| mid + half * (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos()));
    xs
}

/// `max |f - r|` over `n` Chebyshev points of the interval and its endpoints.
pub fn uniform_error_with<F: Fn(f64) -> Result<f64>>(r: &RationalApproximant, f: F, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in chebyshev_samples(r.interval, n) {
        worst = worst.max((f(x)? - r.evaluate(x)?).abs());
    }
    Ok(worst)
}

pub fn uniform_error<F: Fn(f64) -> Result<f64>>(r: &RationalApproximant, f: F) -> Result<f64> {
    uniform_error_with(r, f, ERROR_SAMPLES)
}

/// Smallest `K` in `1..=K_MAX` whose uniform error is at most `target`.
pub fn choose_k(kind: FunctionKind, interval: [f64; 2], target: f64) -> Result<RationalApproximant> {
    if !(target > 0.0) {
        return Err(contract(format!("target accuracy must be positive, got {target}")));
    }
    if let FunctionKind::Constant(c) = kind {
        return build_constant(c, interval);
    }
    let mut best: Option<RationalApproximant> = None;
    for k in 1..=K_MAX {
        let r = build(kind, k, interval)?;
        if r.eps <= target {
            return Ok(r);
        }
        if best.as_ref().is_none_or(|b| r.eps < b.eps) {
            best = Some(r);
        }
    }
    let best = best.expect("schedule is nonempty");
    Err(Error::UnreachableAccuracy { target, best: best.eps, best_k: best.k })
}
