use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tridiag::{quadrature_value, SymTridiagonal};
use crate::error::{contract, Error, Result};
use crate::operators::{dot, norm, LinearOperator};

pub const DEFAULT_M_MAX: usize = 2000;
/// Basis entries (`n · m_max`) above which the default switches from full to partial reorthogonalization.
pub const FULL_REORTH_BUDGET: usize = 1 << 26;
pub const BREAKDOWN_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReorthMode {
    None,
    #[default]
    Full,
    /// Reorthogonalize when the estimated loss of orthogonality exceeds `√eps`.
    Partial,
}

impl FromStr for ReorthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "full" => Ok(Self::Full),
            "partial" => Ok(Self::Partial),
            _ => Err(Error::Unsupported(format!("reorthogonalization mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    pub reorth: ReorthMode,
    pub m_max: usize,
    /// Breakdown is declared when `β_{m+1} <= breakdown_tol · ‖A‖`.
    pub breakdown_tol: f64,
}

impl LanczosConfig {
    pub fn new(reorth: ReorthMode, m_max: usize) -> Self {
        Self { reorth, m_max, breakdown_tol: BREAKDOWN_TOL }
    }

    /// Full reorthogonalization when the basis fits the memory budget, partial otherwise.
    pub fn auto(n: usize, m_max: usize) -> Self {
        let mode = if n.saturating_mul(m_max) <= FULL_REORTH_BUDGET {
            ReorthMode::Full
        } else {
            ReorthMode::Partial
        };
        Self::new(mode, m_max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepResult {
    pub alpha: f64,
    pub beta_next: f64,
    /// `β_{m+1}` fell below the breakdown tolerance: the Krylov space is invariant.
    pub breakdown: bool,
}

/// Lanczos recurrence state for one start vector.
pub struct LanczosState<'a> {
    op: &'a dyn LinearOperator,
    config: LanczosConfig,
    /// `v_1..v_{m+1}`; entries dropped (emptied) in `ReorthMode::None` once no longer needed.
    basis: Vec<Vec<f64>>,
    tridiag: SymTridiagonal,
    beta_next: f64,
    norm_sq: f64,
    anorm: f64,
    breakdown: bool,
    omega_prev: Vec<f64>,
    omega_cur: Vec<f64>,
    force_reorth: bool,
    reorth_steps: usize,
    w: Vec<f64>,
}

impl<'a> LanczosState<'a> {
    /// Starts from `v_1 = u / ‖u‖`.
    pub fn new(op: &'a dyn LinearOperator, u: &[f64], config: LanczosConfig) -> Result<Self> {
        let n = op.dim();
        if u.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: u.len() });
        }
        let norm_sq = dot(u, u);
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(contract("Lanczos start vector must be nonzero and finite"));
        }
        let s = norm_sq.sqrt();
        Ok(Self {
            op,
            config,
            basis: vec![u.iter().map(|x| x / s).collect()],
            tridiag: SymTridiagonal::default(),
            beta_next: 0.0,
            norm_sq,
            anorm: 0.0,
            breakdown: false,
            omega_prev: Vec::new(),
            omega_cur: vec![1.0],
            force_reorth: false,
            reorth_steps: 0,
            w: vec![0.0; n],
        })
    }

    pub fn order(&self) -> usize {
        self.tridiag.order()
    }

    pub fn tridiag(&self) -> &SymTridiagonal {
        &self.tridiag
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn config(&self) -> &LanczosConfig {
        &self.config
    }

    /// `β_{m+1}` from the latest step.
    pub fn beta_next(&self) -> f64 {
        self.beta_next
    }

    pub fn is_broken_down(&self) -> bool {
        self.breakdown
    }

    /// Number of steps in which the new vector was explicitly reorthogonalized.
    pub fn reorth_steps(&self) -> usize {
        self.reorth_steps
    }

    /// Running estimate of `‖A‖` from the Jacobi matrix.
    pub fn norm_estimate(&self) -> f64 {
        self.anorm
    }

    /// Lanczos vector `v_k` (1-based), if still stored.
    pub fn basis_vector(&self, k: usize) -> Option<&[f64]> {
        self.basis.get(k.checked_sub(1)?).filter(|v| !v.is_empty()).map(|v| v.as_slice())
    }

    /// Largest `|v_j · v_k|`, `j < k <= m`, over stored vectors.
    pub fn orthogonality_loss(&self) -> f64 {
        let m = self.order().min(self.basis.len());
        let mut worst: f64 = 0.0;
        for k in 0..m {
            for j in 0..k {
                if !self.basis[j].is_empty() && !self.basis[k].is_empty() {
                    worst = worst.max(dot(&self.basis[j], &self.basis[k]).abs());
                }
            }
        }
        worst
    }

    /// One step: appends `α_m` to `T` and forms `v_{m+1}` unless the recurrence breaks down.
    pub fn step(&mut self) -> Result<StepResult> {
        let n = self.op.dim();
        let m = self.order();
        if self.breakdown {
            return Err(contract("Lanczos step after breakdown; restart first"));
        }
        if m >= n || m >= self.config.m_max {
            return Err(contract(format!("Lanczos step {} exceeds min(n, m_max)", m + 1)));
        }
        let beta_m = self.beta_next;
        let mut w = std::mem::take(&mut self.w);
        self.op.apply_unchecked(&self.basis[m], &mut w);
        if m > 0 {
            let prev = &self.basis[m - 1];
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= beta_m * pi;
            }
        }
        let v = &self.basis[m];
        let alpha = dot(v, &w);
        for (wi, vi) in w.iter_mut().zip(v) {
            *wi -= alpha * vi;
        }
        self.tridiag.push(alpha, beta_m);
        self.anorm = self.anorm.max(alpha.abs() + beta_m);

        let mut beta = norm(&w);
        match self.config.reorth {
            ReorthMode::None => {}
            ReorthMode::Full => {
                self.reorthogonalize(&mut w);
                self.reorth_steps += 1;
                beta = norm(&w);
            }
            ReorthMode::Partial => {
                if self.update_omega(beta) {
                    self.reorthogonalize(&mut w);
                    self.reorth_steps += 1;
                    beta = norm(&w);
                }
            }
        }
        self.anorm = self.anorm.max(alpha.abs() + beta_m + beta);
        self.beta_next = beta;

        if !beta.is_finite() || !alpha.is_finite() {
            return Err(Error::Numerical(format!("non-finite Lanczos coefficients at step {}", m + 1)));
        }
        if beta <= self.config.breakdown_tol * self.anorm {
            self.breakdown = true;
            self.w = w;
            return Ok(StepResult { alpha, beta_next: beta, breakdown: true });
        }
        let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
        self.w = w;
        self.basis.push(next);
        if self.config.reorth == ReorthMode::None && m >= 1 {
            self.basis[m - 1] = Vec::new();
        }
        Ok(StepResult { alpha, beta_next: beta, breakdown: false })
    }

    /// Two passes of classical Gram–Schmidt against `v_1..v_m`.
    fn reorthogonalize(&self, w: &mut [f64]) {
        let m = self.order();
        for _ in 0..2 {
            let coefs: Vec<f64> = self.basis[..m].iter().map(|v| dot(v, w)).collect();
            for (v, c) in self.basis[..m].iter().zip(coefs) {
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= c * vi;
                }
            }
        }
    }

    /// Advances the loss-of-orthogonality estimates `ω_{m+1,j}`; returns whether to reorthogonalize.
    fn update_omega(&mut self, beta: f64) -> bool {
        let k = self.order();
        let eps = f64::EPSILON;
        let alphas = self.tridiag.alphas();
        let betas = self.tridiag.betas();
        // b(j) = β_j with β_1 = 0.
        let b = |j: usize| if j <= 1 { 0.0 } else { betas[j - 2] };
        let noise = 0.5 * eps * (self.op.dim() as f64).sqrt() * self.anorm.max(beta) / beta.max(f64::MIN_POSITIVE);
        let mut next = vec![0.0; k + 1];
        for j in 1..k {
            let j0 = j - 1;
            let lower = if j0 > 0 { self.omega_cur[j0 - 1] } else { 0.0 };
            let raw = b(j + 1) * self.omega_cur[j0 + 1] + (alphas[j0] - alphas[k - 1]) * self.omega_cur[j0]
                + b(j) * lower
                - b(k) * self.omega_prev[j0];
            let val = raw / beta.max(f64::MIN_POSITIVE);
            next[j0] = val + noise.copysign(val);
        }
        if k >= 1 {
            next[k - 1] = noise;
        }
        next[k] = 1.0;
        let worst = next[..k].iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let trigger = self.force_reorth || worst > eps.sqrt();
        if trigger {
            for x in &mut next[..k] {
                *x = eps;
            }
            self.force_reorth = !self.force_reorth;
        }
        self.omega_prev = std::mem::replace(&mut self.omega_cur, next);
        trigger
    }

    /// After breakdown, continues with a random unit vector orthogonal to the stored basis
    /// (coupled to the previous block by `β = 0`).
    pub fn restart(&mut self, seed: u64) -> Result<()> {
        if !self.breakdown {
            return Err(contract("restart is only meaningful after breakdown"));
        }
        if self.config.reorth == ReorthMode::None {
            return Err(contract("restart needs the stored basis (reorthogonalization enabled)"));
        }
        let n = self.op.dim();
        if self.order() >= n {
            return Err(contract("Krylov space already spans R^n"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let before = norm(&w);
            self.reorthogonalize(&mut w);
            let after = norm(&w);
            if after > 1e-8 * before {
                self.basis.push(w.iter().map(|x| x / after).collect());
                self.beta_next = 0.0;
                self.breakdown = false;
                let k = self.order();
                self.omega_prev = vec![f64::EPSILON; k];
                self.omega_cur = vec![f64::EPSILON; k + 1];
                self.omega_cur[k] = 1.0;
                self.force_reorth = true;
                return Ok(());
            }
        }
        Err(Error::Numerical("could not draw a restart vector outside the Krylov space".into()))
    }

    /// `‖u‖² e1ᵀ f(T_m) e1`.
    pub fn bilinear_estimate<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<f64> {
        if self.order() == 0 {
            return Err(contract("bilinear estimate before the first Lanczos step"));
        }
        Ok(self.norm_sq * quadrature_value(&self.tridiag, f)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lanczos::tridiag_eigen;
    use crate::operators::{Diagonal, Laplacian2D};

    fn full(m_max: usize) -> LanczosConfig {
        LanczosConfig::new(ReorthMode::Full, m_max)
    }

    #[test]
    fn init_normalizes() {
        let op = Diagonal(vec![1.0, 2.0, 3.0]);
        let s = LanczosState::new(&op, &[2.0, 0.0, 0.0], full(10)).unwrap();
        assert_eq!(s.norm_sq(), 4.0);
        assert_eq!(s.basis_vector(1).unwrap(), &[1.0, 0.0, 0.0]);
        assert!(LanczosState::new(&op, &[0.0; 3], full(10)).is_err());
        assert!(LanczosState::new(&op, &[1.0; 2], full(10)).is_err());
    }

    #[test]
    fn identity_breaks_down_immediately() {
        let op = Diagonal(vec![1.0; 5]);
        let mut s = LanczosState::new(&op, &[1.0, -1.0, 1.0, 1.0, -1.0], full(10)).unwrap();
        let r = s.step().unwrap();
        assert!((r.alpha - 1.0).abs() < 1e-15);
        assert!(r.breakdown);
        assert!((s.bilinear_estimate(|x| Ok((-x).exp())).unwrap() - 5.0 * (-1f64).exp()).abs() < 1e-14);
        assert!(s.step().is_err());
    }

    #[test]
    fn two_by_two_by_hand() {
        let op = Diagonal(vec![1.0, 3.0]);
        let h = 0.5f64.sqrt();
        let mut s = LanczosState::new(&op, &[h, h], full(10)).unwrap();
        let r1 = s.step().unwrap();
        assert!((r1.alpha - 2.0).abs() < 1e-15 && (r1.beta_next - 1.0).abs() < 1e-15);
        let r2 = s.step().unwrap();
        assert!((r2.alpha - 2.0).abs() < 1e-15);
        let e = tridiag_eigen(s.tridiag()).unwrap();
        assert!((e.thetas[0] - 1.0).abs() < 1e-14 && (e.thetas[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn laplacian_first_alpha_is_diagonal() {
        let op = Laplacian2D::new(2, 2).unwrap();
        let mut s = LanczosState::new(&op, &[1.0, 0.0, 0.0, 0.0], full(4)).unwrap();
        assert_eq!(s.step().unwrap().alpha, 4.0);
    }

    #[test]
    fn orthogonality_is_maintained() {
        let op = Laplacian2D::new(30, 40).unwrap();
        let u: Vec<f64> = (0..1200).map(|i| if (i * 7919) % 13 < 6 { 1.0 } else { -1.0 }).collect();
        for mode in [ReorthMode::Full, ReorthMode::Partial] {
            let mut s = LanczosState::new(&op, &u, LanczosConfig::new(mode, 200)).unwrap();
            for _ in 0..150 {
                s.step().unwrap();
            }
            for k in 1..=s.order() {
                let v = s.basis_vector(k).unwrap();
                assert!((norm(v) - 1.0).abs() < 1e-12);
            }
            let loss = s.orthogonality_loss();
            assert!(loss <= f64::EPSILON.sqrt(), "{mode:?}: {loss:e}");
        }
        let mut s = LanczosState::new(&op, &u, LanczosConfig::new(ReorthMode::None, 200)).unwrap();
        for _ in 0..150 {
            s.step().unwrap();
        }
        assert_eq!(s.reorth_steps(), 0);
        assert!(s.basis_vector(1).is_none());
    }

    #[test]
    fn restart_continues_to_full_tridiagonalization() {
        let op = Diagonal(vec![1.0, 1.0, 2.0, 3.0]);
        let mut s = LanczosState::new(&op, &[1.0, 0.0, 0.0, 0.0], full(10)).unwrap();
        let mut steps = 0;
        while s.order() < 4 {
            if s.is_broken_down() {
                s.restart(steps as u64).unwrap();
            }
            s.step().unwrap();
            steps += 1;
        }
        let mut thetas = tridiag_eigen(s.tridiag()).unwrap().thetas;
        thetas.iter_mut().for_each(|t| *t = (*t * 1e10).round() / 1e10);
        assert_eq!(thetas, vec![1.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn auto_mode_respects_budget() {
        assert_eq!(LanczosConfig::auto(10_800, DEFAULT_M_MAX).reorth, ReorthMode::Full);
        assert_eq!(LanczosConfig::auto(120_000, DEFAULT_M_MAX).reorth, ReorthMode::Partial);
    }
}
