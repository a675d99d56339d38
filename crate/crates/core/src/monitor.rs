//! A-posteriori error estimation for the Lanczos bilinear form.
//!
//! The increment `d_m^K = e1ᵀr(T_{m+1})e1 - e1ᵀr(T_m)e1` of the rational surrogate is
//! obtained from a running LU factorization of `T_m - z_k I` per pole, at `O(K)` cost per
//! step. Increments are summed over a lookback window to estimate the error at an earlier
//! step.

use num_complex::Complex64;

use crate::error::{contract, Error, Result};
use crate::rational::RationalApproximant;

pub const DEFAULT_LOOKBACK_T: f64 = 0.1;
const PIVOT_GUARD: f64 = 1e-300;

/// Per-pole pivots `u_m` and `η_m = e_mᵀ(T_m - zI)⁻¹e1` (with `η_{m-1}` kept).
#[derive(Clone, Debug, Default)]
pub struct PoleState {
    pivots: Vec<Complex64>,
    eta: Vec<Complex64>,
    eta_prev: Vec<Complex64>,
    step: usize,
}

impl PoleState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn step(&self) -> usize {
        self.step
    }
    pub fn pivots(&self) -> &[Complex64] {
        &self.pivots
    }
    pub fn eta(&self) -> &[Complex64] {
        &self.eta
    }
    pub fn eta_prev(&self) -> &[Complex64] {
        &self.eta_prev
    }

    /// Absorbs `α_m` and `β_m` (unused at `m = 1`) for every pole.
    pub fn update(&mut self, poles: &[Complex64], alpha: f64, beta: f64) -> Result<()> {
        let m = self.step + 1;
        if m == 1 {
            self.pivots = poles.iter().map(|z| alpha - z).collect();
            self.eta_prev = vec![Complex64::new(0.0, 0.0); poles.len()];
            for (k, u) in self.pivots.iter().enumerate() {
                if u.norm() < PIVOT_GUARD {
                    return Err(Error::PivotBreakdown { pole: k, step: m });
                }
            }
            self.eta = self.pivots.iter().map(|u| u.inv()).collect();
        } else {
            for (k, z) in poles.iter().enumerate() {
                let u = alpha - z - beta * beta / self.pivots[k];
                if !(u.norm() >= PIVOT_GUARD) {
                    return Err(Error::PivotBreakdown { pole: k, step: m });
                }
                self.pivots[k] = u;
                self.eta_prev[k] = self.eta[k];
                self.eta[k] = -beta * self.eta[k] / u;
            }
        }
        self.step = m;
        Ok(())
    }
}

/// Outcome of the lookback test at the newest increment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lookback {
    Pending,
    /// The quadrature at step `retired` is accepted; `estimate` is `d_{retired, m}^K`.
    Converged { retired: usize, estimate: f64 },
}

/// Incremental-error history, cumulative sums and the lookback convergence test.
#[derive(Clone, Debug)]
pub struct ErrorMonitor<'r> {
    approx: &'r RationalApproximant,
    poles: PoleState,
    /// `d_1, d_2, ...` (entry `i` holds `d_{i+1}`).
    history: Vec<f64>,
    /// `prefix[j] = d_1 + ... + d_j`, `prefix[0] = 0`.
    prefix: Vec<f64>,
    t: f64,
    tol: f64,
    sign_flips: usize,
    converged: Option<Lookback>,
}

impl<'r> ErrorMonitor<'r> {
    /// `t` is the lookback ratio threshold, `tol` the scaled tolerance `δ/‖u‖²`.
    pub fn new(approx: &'r RationalApproximant, t: f64, tol: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(contract(format!("lookback threshold t = {t} must lie in (0, 1)")));
        }
        if !(tol >= 0.0) {
            return Err(contract(format!("tolerance must be nonnegative, got {tol}")));
        }
        Ok(Self {
            approx,
            poles: PoleState::new(),
            history: Vec::new(),
            prefix: vec![0.0],
            t,
            tol,
            sign_flips: 0,
            converged: None,
        })
    }

    pub fn approximant(&self) -> &RationalApproximant {
        self.approx
    }
    pub fn pole_state(&self) -> &PoleState {
        &self.poles
    }
    pub fn history(&self) -> &[f64] {
        &self.history
    }
    pub fn prefix_sums(&self) -> &[f64] {
        &self.prefix
    }
    pub fn threshold(&self) -> f64 {
        self.t
    }
    pub fn tolerance(&self) -> f64 {
        self.tol
    }
    pub fn sign_flips(&self) -> usize {
        self.sign_flips
    }
    pub fn converged(&self) -> Option<Lookback> {
        self.converged
    }

    /// Absorbs Lanczos step `m` (`α_m`, `β_m`); from `m = 2` on, appends and returns `d_{m-1}^K`.
    pub fn push_step(&mut self, alpha: f64, beta: f64) -> Result<Option<f64>> {
        self.poles.update(self.approx.poles(), alpha, beta)?;
        if self.poles.step() == 1 {
            return Ok(None);
        }
        let d = self.incremental_error(beta);
        self.record(d);
        Ok(Some(d))
    }

    /// `-Re Σ_k c_k β_m η_m^k η_{m-1}^k` from the current pole state.
    pub fn incremental_error(&self, beta: f64) -> f64 {
        let s: Complex64 = self
            .approx
            .coeffs()
            .iter()
            .zip(self.poles.eta().iter().zip(self.poles.eta_prev()))
            .map(|(c, (e, ep))| c * e * ep)
            .sum();
        -(beta * s).re
    }

    fn record(&mut self, d: f64) {
        if let Some(&last) = self.history.iter().rev().find(|x| **x != 0.0) {
            if d != 0.0 && (d > 0.0) != (last > 0.0) {
                self.sign_flips += 1;
            }
        }
        self.history.push(d);
        self.prefix.push(self.prefix[self.prefix.len() - 1] + d);
    }

    /// Records a breakdown right after Lanczos step `m`: `T_m` is exact, so `d_m = 0` and step
    /// `m` is retired with a zero estimate.
    pub fn breakdown(&mut self) -> Lookback {
        let m = self.poles.step();
        if self.history.len() < m {
            self.record(0.0);
        }
        let out = Lookback::Converged { retired: m, estimate: 0.0 };
        self.converged = Some(out);
        out
    }

    /// `d_{m, m2}^K = Σ_{i=m}^{m2-1} d_i^K` for `1 <= m < m2 <= len(history) + 1`.
    pub fn cumulative_error(&self, m: usize, m2: usize) -> Result<f64> {
        if m == 0 || m >= m2 || m2 > self.history.len() + 1 {
            return Err(contract(format!(
                "cumulative window [{m}, {m2}) outside 1..={}",
                self.history.len() + 1
            )));
        }
        Ok(self.prefix[m2 - 1] - self.prefix[m - 1])
    }

    /// Lookback at the newest increment `d_m`: the latest earlier step `j` with
    /// `|d_m| <= t |d_j|` is retired once `|d_{j,m}| < tol`.
    pub fn lookback(&mut self) -> Lookback {
        let m = self.history.len();
        if m < 2 {
            return Lookback::Pending;
        }
        let dm = self.history[m - 1].abs();
        let retired = (1..m).rev().find(|&j| dm <= self.t * self.history[j - 1].abs());
        if let Some(j) = retired {
            let estimate = self.prefix[m - 1] - self.prefix[j - 1];
            if estimate.abs() < self.tol {
                let out = Lookback::Converged { retired: j, estimate };
                self.converged = Some(out);
                return out;
            }
        }
        Lookback::Pending
    }

    /// Smallest `m2 > m` in the history with `|d_{m2}| <= t |d_m|`.
    pub fn forward_window(&self, m: usize) -> Option<usize> {
        let dm = self.history.get(m.checked_sub(1)?)?.abs();
        (m + 1..=self.history.len()).find(|&j| self.history[j - 1].abs() <= self.t * dm)
    }
}

/// Tail-to-window ratios of the sequence model underlying the lookback rule.
pub mod lemmas {
    /// `Σ_{i=m2}^{n-1} a_i / Σ_{i=m}^{m2-1} a_i` for `a = (a_1, ..., a_{n-1})` (1-based).
    pub fn tail_window_ratio(a: &[f64], m: usize, m2: usize) -> f64 {
        let window: f64 = a[m - 1..m2 - 1].iter().sum();
        let tail: f64 = a[m2 - 1..].iter().sum();
        tail / window
    }

    /// Bound for geometric, or nonincreasing with nonincreasing ratios, sequences of length `n - 1`.
    pub fn monotone_bound(t: f64, n: usize, m: usize, m2: usize) -> f64 {
        if n - m2 > m2 - m {
            t / (1.0 - t)
        } else {
            t
        }
    }

    /// `a_m..a_{n-1}`: `i^{-(p+1)}` up to `i = s`, then geometric with ratio `((s-1)/s)^{p+1}`.
    pub fn power_then_geometric(m: usize, s: usize, n: usize, p: f64) -> Vec<f64> {
        let c = ((s as f64 - 1.0) / s as f64).powf(p + 1.0);
        let head = (m..=s).map(|i| (i as f64).powf(-(p + 1.0)));
        let last = (s as f64).powf(-(p + 1.0));
        let tail = (1..n - s).map(move |j| last * c.powi(j as i32));
        head.chain(tail).collect()
    }

    /// Upper bound on the tail-to-window ratio for [`power_then_geometric`] sequences.
    pub fn power_then_geometric_bound(p: f64, t: f64, m2: usize, s: usize) -> f64 {
        let (m2, s) = (m2 as f64, s as f64);
        let bracket = 1.0 + p / s - p / (p + 1.0) / (1.0 - p / (2.0 * s));
        (1.0 + p / m2 - (m2 / s).powf(p) * bracket) / (t.powf(-p / (p + 1.0)) - 1.0)
    }
}
