//! Stochastic trace estimation with per-sample error control and a confidence interval.

mod stats;

pub use stats::{confidence_half_width, erf, mean_and_std, p_alpha, planning_half_width};

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::function::FunctionKind;
use crate::lanczos::{quadrature_value, tridiag_eigen, LanczosConfig, LanczosState, ReorthMode, DEFAULT_M_MAX};
use crate::monitor::{ErrorMonitor, Lookback, DEFAULT_LOOKBACK_T};
use crate::operators::LinearOperator;
use crate::rational::{self, RationalApproximant};

/// Rademacher vector keyed by `(seed, index)`; identical across runs and platforms.
pub fn rademacher_vector(n: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let bits = rng.next_u64();
        let take = (n - out.len()).min(64);
        out.extend((0..take).map(|b| if bits >> b & 1 == 1 { 1.0 } else { -1.0 }));
    }
    out
}

/// One probe's bilinear-form approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub seed: u64,
    /// `‖u‖² e1ᵀ f(T_m̱) e1`.
    pub value: f64,
    /// Lanczos steps run.
    pub steps: usize,
    /// Step `m̱` whose quadrature is reported.
    pub retired: usize,
    /// `‖u‖² d_{m̱,m}^K`, the estimated bilinear-form error of `value`.
    pub error_estimate: f64,
    pub converged: bool,
    pub sign_flips: usize,
    pub reorth_steps: usize,
    pub time_lanczos: f64,
    pub time_error_estimate: f64,
}

/// Runs Lanczos on `u` with the error monitor until the lookback test certifies an earlier
/// step within `delta`, the Krylov space becomes invariant, or `m_max` steps are spent.
pub fn sample_bilinear(
    op: &dyn LinearOperator,
    f: FunctionKind,
    r: &RationalApproximant,
    u: &[f64],
    delta: f64,
    t: f64,
    config: LanczosConfig,
) -> Result<SampleRecord> {
    let mut state = LanczosState::new(op, u, config)?;
    let norm_sq = state.norm_sq();
    let mut monitor = ErrorMonitor::new(r, t, delta / norm_sq)?;
    let cap = op.dim().min(config.m_max);
    let (mut time_lanczos, mut time_err) = (0.0, 0.0);
    let mut beta_m = 0.0;
    let mut outcome = Lookback::Pending;
    while state.order() < cap {
        let clock = Instant::now();
        let step = state.step()?;
        time_lanczos += clock.elapsed().as_secs_f64();

        let clock = Instant::now();
        monitor.push_step(step.alpha, beta_m)?;
        beta_m = step.beta_next;
        outcome = if step.breakdown || state.order() == op.dim() {
            monitor.breakdown()
        } else {
            monitor.lookback()
        };
        time_err += clock.elapsed().as_secs_f64();
        if outcome != Lookback::Pending {
            break;
        }
    }
    let steps = state.order();
    let (retired, estimate, converged) = match outcome {
        Lookback::Converged { retired, estimate } => (retired, estimate, true),
        Lookback::Pending => (steps, f64::NAN, false),
    };
    let clock = Instant::now();
    let value = norm_sq * quadrature_value(&state.tridiag().leading(retired)?, |x| f.eval(x))?;
    time_lanczos += clock.elapsed().as_secs_f64();
    Ok(SampleRecord {
        index: 0,
        seed: 0,
        value,
        steps,
        retired,
        error_estimate: norm_sq * estimate,
        converged,
        sign_flips: monitor.sign_flips(),
        reorth_steps: state.reorth_steps(),
        time_lanczos,
        time_error_estimate: time_err,
    })
}

/// Settings of one trace estimation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Number of probe vectors `N`.
    pub samples: usize,
    pub alpha: f64,
    /// Per-sample tolerance `δ`.
    pub delta: f64,
    pub t: f64,
    pub seed: u64,
    /// `None` picks full or partial reorthogonalization from the memory budget.
    pub reorth: Option<ReorthMode>,
    pub m_max: usize,
    /// Fixed number of poles; `None` selects the smallest adequate `K`.
    pub k: Option<usize>,
    /// Spectrum interval; `None` estimates it with Lanczos.
    pub interval: Option<[f64; 2]>,
    /// Known lower bound of the spectrum (e.g. a nugget) used when estimating the interval.
    pub lower_hint: Option<f64>,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            samples: 100,
            alpha: 3.0,
            delta: 1.0,
            t: DEFAULT_LOOKBACK_T,
            seed: 0,
            reorth: None,
            m_max: DEFAULT_M_MAX,
            k: None,
            interval: None,
            lower_hint: None,
        }
    }
}

impl TraceConfig {
    pub fn lanczos(&self, n: usize) -> LanczosConfig {
        match self.reorth {
            Some(mode) => LanczosConfig::new(mode, self.m_max),
            None => LanczosConfig::auto(n, self.m_max),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub spectrum: f64,
    pub rational: f64,
    /// Lanczos and quadrature, summed over samples.
    pub approximation: f64,
    /// Pole recurrence and lookback, summed over samples.
    pub error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEstimate {
    pub function: FunctionKind,
    pub operator: String,
    pub n: usize,
    pub samples: usize,
    pub alpha: f64,
    pub delta: f64,
    pub t: f64,
    pub seed: u64,
    pub reorth: ReorthMode,
    pub interval: [f64; 2],
    pub k: usize,
    pub rational_eps: f64,
    pub mean: f64,
    pub std_err: f64,
    pub half_width: f64,
    pub p_alpha: f64,
    /// All samples converged, so the interval is backed by the tolerance test.
    pub certified: bool,
    pub mean_steps: f64,
    pub mean_retired: f64,
    pub per_sample: Vec<SampleRecord>,
    pub timings: Timings,
}

impl TraceEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.half_width
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Spectrum interval `[a, b]`: `b` is the largest Ritz value of a short Lanczos run inflated
/// by `1.01`; `a` is `lower_hint` or the smallest Ritz value deflated by the same factor.
pub fn estimate_spectrum_interval(
    op: &dyn LinearOperator,
    lower_hint: Option<f64>,
    steps: usize,
    seed: u64,
) -> Result<[f64; 2]> {
    const SAFETY: f64 = 1.01;
    let n = op.dim();
    let u = rademacher_vector(n, seed, u64::MAX);
    let cap = steps.max(1).min(n);
    let mut state = LanczosState::new(op, &u, LanczosConfig::auto(n, cap))?;
    while state.order() < cap {
        if state.step()?.breakdown {
            break;
        }
    }
    let eig = tridiag_eigen(state.tridiag())?;
    let b = eig.thetas[eig.thetas.len() - 1] * SAFETY;
    let a = lower_hint.unwrap_or(eig.thetas[0] / SAFETY);
    if !(a > 0.0) || !(b > a) {
        return Err(contract(format!("estimated spectrum interval [{a:e}, {b:e}] is not positive")));
    }
    Ok([a, b])
}

/// Interval on which the rational surrogate is built.
fn approximation_interval(f: FunctionKind, interval: [f64; 2]) -> [f64; 2] {
    match f {
        FunctionKind::ExpNeg => [0.0, interval[1]],
        _ => interval,
    }
}

/// Rational surrogate whose uniform error is at most `δ/(2n)` (or with the given `K`).
pub fn select_approximant(
    f: FunctionKind,
    interval: [f64; 2],
    delta: f64,
    n: usize,
    k: Option<usize>,
) -> Result<RationalApproximant> {
    let iv = approximation_interval(f, interval);
    match (k, f) {
        (_, FunctionKind::Constant(c)) => rational::build_constant(c, iv),
        (Some(k), _) => rational::build(f, k, iv),
        (None, _) => rational::choose_k(f, iv, 0.5 * delta / n as f64),
    }
}

/// Estimates `tr f(A)` from `N` Rademacher probes with the confidence interval of the
/// biased sample mean.
pub fn estimate_trace(op: &dyn LinearOperator, f: FunctionKind, config: &TraceConfig) -> Result<TraceEstimate> {
    let n = op.dim();
    if config.samples < 2 {
        return Err(contract(format!("need N >= 2 samples, got {}", config.samples)));
    }
    if !(config.delta >= 0.0) {
        return Err(contract("delta must be nonnegative"));
    }
    let clock = Instant::now();
    let interval = match config.interval {
        Some(iv) => iv,
        None => estimate_spectrum_interval(op, config.lower_hint, 60, config.seed)?,
    };
    let t_spectrum = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let r = select_approximant(f, interval, config.delta, n, config.k)?;
    let t_rational = clock.elapsed().as_secs_f64();

    let lanczos = config.lanczos(n);
    let records: Vec<SampleRecord> = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| {
            let u = rademacher_vector(n, config.seed, i);
            let mut rec = sample_bilinear(op, f, &r, &u, config.delta, config.t, lanczos)?;
            rec.index = i;
            rec.seed = config.seed;
            Ok(rec)
        })
        .collect::<Result<_>>()?;

    let values: Vec<f64> = records.iter().map(|r| r.value).collect();
    let (mean, std_err) = mean_and_std(&values);
    let nf = records.len() as f64;
    Ok(TraceEstimate {
        function: f,
        operator: op.describe(),
        n,
        samples: config.samples,
        alpha: config.alpha,
        delta: config.delta,
        t: config.t,
        seed: config.seed,
        reorth: lanczos.reorth,
        interval,
        k: r.k(),
        rational_eps: r.eps(),
        mean,
        std_err,
        half_width: confidence_half_width(std_err, config.samples, config.delta, config.alpha)?,
        p_alpha: p_alpha(config.alpha),
        certified: records.iter().all(|r| r.converged),
        mean_steps: records.iter().map(|r| r.steps as f64).sum::<f64>() / nf,
        mean_retired: records.iter().map(|r| r.retired as f64).sum::<f64>() / nf,
        timings: Timings {
            spectrum: t_spectrum,
            rational: t_rational,
            approximation: records.iter().map(|r| r.time_lanczos).sum(),
            error_estimate: records.iter().map(|r| r.time_error_estimate).sum(),
        },
        per_sample: records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub delta: f64,
    pub pilot_delta: f64,
    pub pilot_samples: usize,
    pub pilot_mean: f64,
    pub pilot_std: f64,
}

/// Tolerance `δ = βαs/√N` from a pilot run of `pilot` probes at a loose tolerance.
pub fn calibrate_delta(
    op: &dyn LinearOperator,
    f: FunctionKind,
    pilot: usize,
    beta: f64,
    config: &TraceConfig,
) -> Result<Calibration> {
    if pilot < 2 {
        return Err(contract(format!("pilot needs N' >= 2, got {pilot}")));
    }
    if !(beta > 0.0) {
        return Err(contract("beta must be positive"));
    }
    let interval = match config.interval {
        Some(iv) => iv,
        None => estimate_spectrum_interval(op, config.lower_hint, 60, config.seed)?,
    };
    let mid = 0.5 * (interval[0] + interval[1]);
    let pilot_delta = 1e-2 * (op.dim() as f64 * f.eval(mid)?).abs();
    if !(pilot_delta > 0.0) {
        return Err(Error::Calibration("pilot tolerance is zero".into()));
    }
    let pilot_cfg = TraceConfig {
        samples: pilot,
        delta: pilot_delta,
        interval: Some(interval),
        k: None,
        seed: config.seed ^ 0x9e37_79b9_7f4a_7c15,
        ..config.clone()
    };
    let est = estimate_trace(op, f, &pilot_cfg)?;
    if !est.certified {
        return Err(Error::Calibration("pilot samples did not converge".into()));
    }
    if !(est.std_err > 0.0) {
        return Err(Error::Calibration("pilot standard error is zero".into()));
    }
    Ok(Calibration {
        delta: beta * config.alpha * est.std_err / (config.samples as f64).sqrt(),
        pilot_delta,
        pilot_samples: pilot,
        pilot_mean: est.mean,
        pilot_std: est.std_err,
    })
}

/// Per-step quadrature values and error estimates of one Lanczos run (no early stopping).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub step: usize,
    /// `e1ᵀ f(T_m) e1` for the normalized start vector.
    pub value: f64,
    /// `d_m^K` (absent for the last step).
    pub increment: Option<f64>,
    /// Smallest `m' > m` with `|d_{m'}| <= t |d_m|`, and `d_{m,m'}^K`.
    pub window: Option<(usize, f64)>,
}

pub fn bilinear_curve(
    op: &dyn LinearOperator,
    f: FunctionKind,
    r: &RationalApproximant,
    u: &[f64],
    steps: usize,
    t: f64,
    config: LanczosConfig,
) -> Result<Vec<CurveRow>> {
    let mut state = LanczosState::new(op, u, config)?;
    let mut monitor = ErrorMonitor::new(r, t, 0.0)?;
    let mut values = Vec::new();
    let mut beta_m = 0.0;
    let cap = steps.min(op.dim()).min(config.m_max);
    while state.order() < cap {
        let step = state.step()?;
        monitor.push_step(step.alpha, beta_m)?;
        beta_m = step.beta_next;
        values.push(quadrature_value(state.tridiag(), |x| f.eval(x))?);
        if step.breakdown {
            monitor.breakdown();
            break;
        }
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let m = i + 1;
            let window = monitor
                .forward_window(m)
                .map(|m2| (m2, monitor.cumulative_error(m, m2).expect("window inside history")));
            CurveRow { step: m, value, increment: monitor.history().get(i).copied(), window }
        })
        .collect())
}
