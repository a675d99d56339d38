//! Ground truth for tests and table reproduction: closed-form Laplacian spectra, fast sine
//! transform bilinear forms, and dense eigendecomposition / Cholesky routes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{contract, Error, Result};
use crate::operators::{LinearOperator, MaternOperator};

/// Largest dimension accepted by the dense oracles.
pub const DENSE_CAP: usize = 4000;

/// Eigenvalues `4 sin²(iπ/(2(n+1)))`, `i = 1..n`, of `tridiag(-1, 2, -1)`.
pub fn laplacian_1d_eigenvalues(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 4.0 * (i as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2)).collect()
}

/// Spectrum of the 2D Laplacian, kept as its two 1D factors.
#[derive(Clone, Debug)]
pub struct LaplacianSpectrum {
    pub n1: usize,
    pub n2: usize,
    pub ev1: Vec<f64>,
    pub ev2: Vec<f64>,
}

impl LaplacianSpectrum {
    pub fn new(n1: usize, n2: usize) -> Self {
        Self { n1, n2, ev1: laplacian_1d_eigenvalues(n1), ev2: laplacian_1d_eigenvalues(n2) }
    }

    /// `λ_{ij}`, 1-based.
    pub fn eigenvalue(&self, i: usize, j: usize) -> f64 {
        self.ev1[i - 1] + self.ev2[j - 1]
    }

    pub fn min(&self) -> f64 {
        self.ev1[0] + self.ev2[0]
    }

    pub fn max(&self) -> f64 {
        self.ev1[self.n1 - 1] + self.ev2[self.n2 - 1]
    }

    pub fn interval(&self) -> [f64; 2] {
        [self.min(), self.max()]
    }

    pub fn condition_number(&self) -> f64 {
        self.max() / self.min()
    }

    /// All eigenvalues in lexicographic mode order (`i + n1·j`).
    pub fn all(&self) -> Vec<f64> {
        self.ev2.iter().flat_map(|b| self.ev1.iter().map(move |a| a + b)).collect()
    }
}

/// `Σ_{ij} f(λ_{ij})`.
pub fn exact_trace_laplacian<F: Fn(f64) -> Result<f64>>(f: F, n1: usize, n2: usize) -> Result<f64> {
    let spec = LaplacianSpectrum::new(n1, n2);
    let mut total = 0.0;
    for b in &spec.ev2 {
        let mut col = 0.0;
        for a in &spec.ev1 {
            col += f(a + b)?;
        }
        total += col;
    }
    Ok(total)
}

/// Orthonormal type-I sine transform of every contiguous chunk of length `n` in `data`.
fn dst1_chunks(data: &mut [f64], n: usize) {
    let len = 2 * (n + 1);
    let fft = FftPlanner::new().plan_fft_forward(len);
    let scale = (2.0 / (n + 1) as f64).sqrt();
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for chunk in data.chunks_exact_mut(n) {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (j, &x) in chunk.iter().enumerate() {
            buf[j + 1] = Complex64::new(x, 0.0);
            buf[len - 1 - j] = Complex64::new(-x, 0.0);
        }
        fft.process(&mut buf);
        for (k, out) in chunk.iter_mut().enumerate() {
            *out = -0.5 * buf[k + 1].im * scale;
        }
    }
}

/// 2D orthonormal sine transform of a lexicographically ordered `n1 × n2` grid vector.
pub fn dst2(v: &[f64], n1: usize, n2: usize) -> Result<Vec<f64>> {
    if v.len() != n1 * n2 {
        return Err(Error::DimensionMismatch { expected: n1 * n2, got: v.len() });
    }
    let mut a = v.to_vec();
    dst1_chunks(&mut a, n1);
    let mut t = vec![0.0; n1 * n2];
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            t[i2 + n2 * i1] = a[i1 + n1 * i2];
        }
    }
    dst1_chunks(&mut t, n2);
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            a[i1 + n1 * i2] = t[i2 + n2 * i1];
        }
    }
    Ok(a)
}

/// `vᵀ f(A) v = Σ ω² f(λ)` with `ω` the sine-transform coefficients of `v`.
pub fn exact_bilinear_laplacian<F: Fn(f64) -> Result<f64>>(f: F, n1: usize, n2: usize, v: &[f64]) -> Result<f64> {
    let omega = dst2(v, n1, n2)?;
    let spec = LaplacianSpectrum::new(n1, n2);
    let mut total = 0.0;
    for (j, b) in spec.ev2.iter().enumerate() {
        for (i, a) in spec.ev1.iter().enumerate() {
            let w = omega[i + n1 * j];
            total += w * w * f(a + b)?;
        }
    }
    Ok(total)
}

fn check_dense(n: usize, data: &[f64]) -> Result<()> {
    if n > DENSE_CAP {
        return Err(contract(format!("dense oracle limited to n <= {DENSE_CAP}, got {n}")));
    }
    if data.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
    }
    Ok(())
}

/// Full symmetric eigendecomposition of a small dense matrix.
pub struct DenseSpectral {
    eig: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl DenseSpectral {
    /// `data` is row-major `n × n` and symmetric.
    pub fn new(n: usize, data: &[f64]) -> Result<Self> {
        check_dense(n, data)?;
        let m = DMatrix::from_row_slice(n, n, data);
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Numerical("dense symmetric eigensolver did not converge".into()))?;
        Ok(Self { eig })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.eig.eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    fn f_values<F: Fn(f64) -> Result<f64>>(&self, f: &F) -> Result<Vec<f64>> {
        self.eig.eigenvalues.iter().map(|&l| f(l)).collect()
    }

    pub fn trace<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<f64> {
        Ok(self.f_values(&f)?.iter().sum())
    }

    /// `uᵀ f(M) u`.
    pub fn bilinear<F: Fn(f64) -> Result<f64>>(&self, u: &[f64], f: F) -> Result<f64> {
        let q = &self.eig.eigenvectors;
        if u.len() != q.nrows() {
            return Err(Error::DimensionMismatch { expected: q.nrows(), got: u.len() });
        }
        let w = q.transpose() * DVector::from_column_slice(u);
        Ok(self.f_values(&f)?.iter().zip(w.iter()).map(|(fv, wi)| fv * wi * wi).sum())
    }

    /// `f(M)`, row-major.
    pub fn matrix<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<Vec<f64>> {
        let q = &self.eig.eigenvectors;
        let d = DMatrix::from_diagonal(&DVector::from_vec(self.f_values(&f)?));
        let fm = q * d * q.transpose();
        Ok(fm.transpose().as_slice().to_vec())
    }
}

/// `log det M` from the Cholesky factor of a dense SPD matrix.
pub fn dense_logdet(n: usize, data: &[f64]) -> Result<f64> {
    check_dense(n, data)?;
    let chol = nalgebra::Cholesky::new(DMatrix::from_row_slice(n, n, data))
        .ok_or_else(|| contract("matrix is not positive definite"))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

/// Dense 2D Laplacian assembled from the Kronecker form, row-major.
pub fn laplacian_dense(n1: usize, n2: usize) -> Result<Vec<f64>> {
    let n = n1 * n2;
    if n > DENSE_CAP {
        return Err(contract(format!("dense oracle limited to n <= {DENSE_CAP}, got {n}")));
    }
    let l = |k: usize, i: usize, j: usize| -> f64 {
        if i == j {
            2.0
        } else if i.abs_diff(j) == 1 && i < k && j < k {
            -1.0
        } else {
            0.0
        }
    };
    let id = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut a = vec![0.0; n * n];
    for r in 0..n {
        let (r1, r2) = (r % n1, r / n1);
        for c in 0..n {
            let (c1, c2) = (c % n1, c / n1);
            a[r * n + c] = id(r2, c2) * l(n1, r1, c1) + l(n2, r2, c2) * id(r1, c1);
        }
    }
    Ok(a)
}

/// Matérn kernel matrix on the operator's sites, assembled entry by entry, row-major.
pub fn matern_dense(op: &MaternOperator) -> Result<Vec<f64>> {
    let n = op.dim();
    if n > DENSE_CAP {
        return Err(contract(format!("dense oracle limited to n <= {DENSE_CAP}, got {n}")));
    }
    let sites = op.sites();
    let p = op.params();
    let mut a = vec![0.0; n * n];
    for (i, &si) in sites.iter().enumerate() {
        for (j, &sj) in sites.iter().enumerate() {
            a[i * n + j] = p.covariance(si, sj)?;
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Laplacian2D;

    #[test]
    fn tiny_traces() {
        let t = exact_trace_laplacian(|x| Ok((-x).exp()), 2, 2).unwrap();
        let hand = (-2f64).exp() + 2.0 * (-4f64).exp() + (-6f64).exp();
        assert!((t - hand).abs() < 1e-15);
        assert!((t - 0.174_445_3).abs() < 1e-7);
        assert_eq!(exact_trace_laplacian(Ok, 7, 5).unwrap().round(), 4.0 * 35.0);
    }

    #[test]
    fn sine_transform_is_orthonormal_involution() {
        let v: Vec<f64> = (0..35).map(|i| (i as f64 * 0.37).sin()).collect();
        let w = dst2(&v, 7, 5).unwrap();
        let back = dst2(&w, 7, 5).unwrap();
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
        let nv: f64 = v.iter().map(|x| x * x).sum();
        let nw: f64 = w.iter().map(|x| x * x).sum();
        assert!((nv - nw).abs() < 1e-12);
    }

    #[test]
    fn eigenvector_has_single_mass() {
        let v: Vec<f64> = (0..4).map(|k| {
            let (i1, i2) = (k % 2 + 1, k / 2 + 1);
            (PI * i1 as f64 / 3.0).sin() * (PI * i2 as f64 / 3.0).sin() * 2.0 / 3.0
        }).collect();
        let q = exact_bilinear_laplacian(|x| Ok(x * x + 1.0), 2, 2, &v).unwrap();
        assert!((q - 5.0).abs() < 1e-13);
    }

    #[test]
    fn bilinear_identity_matches_apply() {
        let op = Laplacian2D::new(6, 9).unwrap();
        let v: Vec<f64> = (0..54).map(|i| ((i * 31) % 17) as f64 - 8.0).collect();
        let av = op.apply(&v).unwrap();
        let direct: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
        let viadst = exact_bilinear_laplacian(Ok, 6, 9, &v).unwrap();
        assert!((direct - viadst).abs() < 1e-12 * direct.abs());
    }

    #[test]
    fn dense_routes_agree() {
        let eye = vec![1.0, 0.0, 0.0, 1.0];
        assert_eq!(DenseSpectral::new(2, &eye).unwrap().trace(|x| Ok(x.ln())).unwrap(), 0.0);
        let d = vec![1.0, 0.0, 0.0, 4.0];
        assert!((DenseSpectral::new(2, &d).unwrap().trace(|x| Ok(x.sqrt())).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(dense_logdet(2, &eye).unwrap(), 0.0);
        assert!((dense_logdet(2, &[2.0, 0.0, 0.0, 8.0]).unwrap() - 16f64.ln()).abs() < 1e-15);
        assert!(dense_logdet(2, &[1.0, 2.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn laplacian_spectrum_matches_dense() {
        let a = laplacian_dense(6, 6).unwrap();
        let dense = DenseSpectral::new(36, &a).unwrap().eigenvalues();
        let mut closed = LaplacianSpectrum::new(6, 6).all();
        closed.sort_by(f64::total_cmp);
        for (x, y) in dense.iter().zip(&closed) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_cap_enforced() {
        assert!(DenseSpectral::new(DENSE_CAP + 1, &[]).is_err());
    }
}
