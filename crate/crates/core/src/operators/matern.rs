use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::LinearOperator;
use crate::error::{contract, Error, Result};

/// Matérn kernel `φ(r)` plus a nugget `τ` at `r = 0`, for half-integer `ν ∈ {0.5, 1.5, 2.5}`.
pub fn matern_kernel(r: f64, nu: f64, tau: f64) -> Result<f64> {
    if !(r >= 0.0) || !(tau >= 0.0) || !(nu > 0.0) {
        return Err(contract(format!("matern_kernel needs r >= 0, nu > 0, tau >= 0 (r={r}, nu={nu}, tau={tau})")));
    }
    let smooth = if nu == 0.5 {
        (-r).exp()
    } else if nu == 1.5 {
        let s = 3f64.sqrt() * r;
        (1.0 + s) * (-s).exp()
    } else if nu == 2.5 {
        let s = 5f64.sqrt() * r;
        (1.0 + s + s * s / 3.0) * (-s).exp()
    } else {
        return Err(Error::Unsupported(format!("Matérn smoothness nu = {nu} (supported: 0.5, 1.5, 2.5)")));
    };
    Ok(if r == 0.0 { smooth + tau } else { smooth })
}

/// Draws `round(fraction · n1 · n2)` distinct grid indices (at least one), sorted ascending.
pub fn sample_sites(n1: usize, n2: usize, fraction: f64, seed: u64) -> Result<Vec<usize>> {
    let total = n1 * n2;
    if total == 0 || !(fraction > 0.0 && fraction <= 1.0) {
        return Err(contract(format!("cannot sample a fraction {fraction} of a {n1}x{n2} grid")));
    }
    let count = ((fraction * total as f64).round() as usize).clamp(1, total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sites = rand::seq::index::sample(&mut rng, total, count).into_vec();
    sites.sort_unstable();
    Ok(sites)
}

/// Grid and kernel parameters of a Matérn covariance testbed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaternParams {
    pub n1: usize,
    pub n2: usize,
    /// Lengthscale along the first grid coordinate, in grid units.
    pub l1: f64,
    pub l2: f64,
    pub nu: f64,
    pub tau: f64,
}

impl MaternParams {
    /// `ℓ1 = 0.4·n2`, `ℓ2 = 0.4·n1`, `ν = 1.5`, `τ = 1e-5`.
    pub fn standard(n1: usize, n2: usize) -> Self {
        Self { n1, n2, l1: 0.4 * n2 as f64, l2: 0.4 * n1 as f64, nu: 1.5, tau: 1e-5 }
    }

    /// Elliptical distance between grid offsets `(d1, d2)`.
    pub fn distance(&self, d1: f64, d2: f64) -> f64 {
        ((d1 / self.l1).powi(2) + (d2 / self.l2).powi(2)).sqrt()
    }

    /// Kernel value between grid indices `a` and `b` (lexicographic, `i1 + n1·i2`).
    pub fn covariance(&self, a: usize, b: usize) -> Result<f64> {
        let (a1, a2) = (a % self.n1, a / self.n1);
        let (b1, b2) = (b % self.n1, b / self.n1);
        let r = self.distance(a1.abs_diff(b1) as f64, a2.abs_diff(b2) as f64);
        matern_kernel(r, self.nu, self.tau)
    }
}

/// Matérn covariance matrix on scattered sites of a regular grid, applied through a
/// `(2n1) × (2n2)` circulant embedding and 2D FFTs.
pub struct MaternOperator {
    params: MaternParams,
    sites: Vec<usize>,
    m1: usize,
    m2: usize,
    /// Eigenvalues of the embedded circulant, transposed layout `p2 + m2·p1`, pre-scaled by `1/(m1·m2)`.
    symbol: Vec<f64>,
    fwd1: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for MaternOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MaternOperator")
            .field("params", &self.params)
            .field("sites", &self.sites.len())
            .finish()
    }
}

impl MaternOperator {
    pub fn new(params: MaternParams, sites: Vec<usize>) -> Result<Self> {
        let (n1, n2) = (params.n1, params.n2);
        if n1 == 0 || n2 == 0 {
            return Err(contract("grid dimensions must be positive"));
        }
        if !(params.l1 > 0.0 && params.l2 > 0.0) {
            return Err(contract("lengthscales must be positive"));
        }
        if sites.is_empty() {
            return Err(contract("empty site list"));
        }
        let mut seen = vec![false; n1 * n2];
        for &s in &sites {
            if s >= n1 * n2 || std::mem::replace(&mut seen[s], true) {
                return Err(contract(format!("site {s} is out of range or repeated")));
            }
        }
        matern_kernel(0.0, params.nu, params.tau)?;

        let (m1, m2) = (2 * n1, 2 * n2);
        let mut planner = FftPlanner::new();
        let mut op = Self {
            params,
            sites,
            m1,
            m2,
            symbol: Vec::new(),
            fwd1: planner.plan_fft_forward(m1),
            inv1: planner.plan_fft_inverse(m1),
            fwd2: planner.plan_fft_forward(m2),
            inv2: planner.plan_fft_inverse(m2),
        };

        let mut row = vec![Complex64::new(0.0, 0.0); m1 * m2];
        for p2 in 0..m2 {
            let d2 = p2.min(m2 - p2) as f64;
            for p1 in 0..m1 {
                let d1 = p1.min(m1 - p1) as f64;
                let r = params.distance(d1, d2);
                row[p1 + m1 * p2] = Complex64::new(matern_kernel(r, params.nu, params.tau)?, 0.0);
            }
        }
        let mut t = vec![Complex64::new(0.0, 0.0); m1 * m2];
        op.forward(&mut row, &mut t, m2);
        let scale = 1.0 / (m1 * m2) as f64;
        op.symbol = t.iter().map(|z| z.re * scale).collect();
        Ok(op)
    }

    pub fn params(&self) -> &MaternParams {
        &self.params
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// 2D forward FFT of `buf` (layout `p1 + m1·p2`, only the first `rows` rows nonzero)
    /// into `t` (layout `p2 + m2·p1`).
    fn forward(&self, buf: &mut [Complex64], t: &mut [Complex64], rows: usize) {
        let (m1, m2) = (self.m1, self.m2);
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.scratch_len()];
        self.fwd1.process_with_scratch(&mut buf[..m1 * rows], &mut scratch);
        for p2 in 0..m2 {
            for p1 in 0..m1 {
                t[p2 + m2 * p1] = buf[p1 + m1 * p2];
            }
        }
        self.fwd2.process_with_scratch(t, &mut scratch);
    }

    fn scratch_len(&self) -> usize {
        [&self.fwd1, &self.inv1, &self.fwd2, &self.inv2]
            .iter()
            .map(|f| f.get_inplace_scratch_len())
            .max()
            .unwrap_or(0)
    }
}

impl LinearOperator for MaternOperator {
    fn dim(&self) -> usize {
        self.sites.len()
    }

    fn apply_unchecked(&self, x: &[f64], y: &mut [f64]) {
        let (n1, n2, m1, m2) = (self.params.n1, self.params.n2, self.m1, self.m2);
        let zero = Complex64::new(0.0, 0.0);
        let mut buf = vec![zero; m1 * m2];
        let mut t = vec![zero; m1 * m2];
        for (&s, &xi) in self.sites.iter().zip(x) {
            buf[s % n1 + m1 * (s / n1)] = Complex64::new(xi, 0.0);
        }
        self.forward(&mut buf, &mut t, n2);
        for (z, &lam) in t.iter_mut().zip(&self.symbol) {
            *z *= lam;
        }
        let mut scratch = vec![zero; self.scratch_len()];
        self.inv2.process_with_scratch(&mut t, &mut scratch);
        for p2 in 0..n2 {
            for p1 in 0..m1 {
                buf[p1 + m1 * p2] = t[p2 + m2 * p1];
            }
        }
        self.inv1.process_with_scratch(&mut buf[..m1 * n2], &mut scratch);
        for (&s, yi) in self.sites.iter().zip(y.iter_mut()) {
            *yi = buf[s % n1 + m1 * (s / n1)].re;
        }
    }

    fn describe(&self) -> String {
        let p = &self.params;
        format!(
            "matern({}x{}, sites={}, l=({}, {}), nu={}, tau={:e})",
            p.n1,
            p.n2,
            self.sites.len(),
            p.l1,
            p.l2,
            p.nu,
            p.tau
        )
    }
}
