//! Matrix-free symmetric operators and the two testbeds: the 2D Dirichlet Laplacian
//! and a Matérn covariance on scattered grid sites.

mod laplacian;
mod matern;

pub use laplacian::Laplacian2D;
pub use matern::{matern_kernel, sample_sites, MaternOperator, MaternParams};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A symmetric linear map on `R^n`, touched only through matrix-vector products.
pub trait LinearOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// Whether the operator is asserted to be symmetric positive-definite.
    fn spd_hint(&self) -> bool {
        true
    }

    /// `y <- A x`; lengths are already validated.
    fn apply_unchecked(&self, x: &[f64], y: &mut [f64]);

    /// Short human-readable description recorded in experiment output.
    fn describe(&self) -> String;

    fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        let n = self.dim();
        for len in [x.len(), y.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        self.apply_unchecked(x, y);
        Ok(())
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dim()];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn spd_hint(&self) -> bool {
        (**self).spd_hint()
    }
    fn apply_unchecked(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_unchecked(x, y)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Dense symmetric matrix stored row-major; mainly for tests and small problems.
#[derive(Clone, Debug)]
pub struct DenseSymmetric {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymmetric {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if (a - b).abs() > 1e-12 * (a.abs() + b.abs()).max(1.0) {
                    return Err(Error::Contract(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

impl LinearOperator for DenseSymmetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply_unchecked(&self, x: &[f64], y: &mut [f64]) {
        for (row, yi) in self.data.chunks_exact(self.n).zip(y.iter_mut()) {
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
    fn describe(&self) -> String {
        format!("dense({})", self.n)
    }
}

/// Diagonal matrix `diag(d)`.
#[derive(Clone, Debug)]
pub struct Diagonal(pub Vec<f64>);

impl LinearOperator for Diagonal {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn spd_hint(&self) -> bool {
        self.0.iter().all(|&d| d > 0.0)
    }
    fn apply_unchecked(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), di) in y.iter_mut().zip(x).zip(&self.0) {
            *yi = di * xi;
        }
    }
    fn describe(&self) -> String {
        format!("diagonal({})", self.0.len())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Crude `‖A‖` estimate: the largest `‖Ax‖/‖x‖` over a few random probes.
pub fn norm_estimate(op: &dyn LinearOperator, probes: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = op.dim();
    let mut y = vec![0.0; n];
    (0..probes)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            op.apply_unchecked(&x, &mut y);
            norm(&y) / norm(&x)
        })
        .fold(0.0, f64::max)
}

/// Largest relative symmetry defect `|x·Ay − y·Ax| / (‖x‖‖y‖‖A‖)` over random pairs.
pub fn symmetry_defect(op: &dyn LinearOperator, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = op.dim();
    let anorm = norm_estimate(op, 4, seed ^ 0x5eed).max(f64::MIN_POSITIVE);
    let (mut ax, mut ay) = (vec![0.0; n], vec![0.0; n]);
    (0..pairs)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            op.apply_unchecked(&x, &mut ax);
            op.apply_unchecked(&y, &mut ay);
            (dot(&x, &ay) - dot(&y, &ax)).abs() / (norm(&x) * norm(&y) * anorm)
        })
        .fold(0.0, f64::max)
}

/// Smallest Rayleigh quotient `x·Ax / x·x` over random nonzero probes.
pub fn min_rayleigh_quotient(op: &dyn LinearOperator, probes: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = op.dim();
    let mut ax = vec![0.0; n];
    (0..probes)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            op.apply_unchecked(&x, &mut ax);
            dot(&x, &ax) / dot(&x, &x)
        })
        .fold(f64::INFINITY, f64::min)
}
