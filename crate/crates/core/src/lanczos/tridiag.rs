use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};

const QL_MAX_ITER: usize = 50;

/// Symmetric tridiagonal (Jacobi) matrix `T_m`: diagonal `α_1..α_m`, off-diagonal `β_2..β_m`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymTridiagonal {
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.len() != betas.len() + 1 {
            return Err(contract(format!(
                "tridiagonal needs len(betas) = len(alphas) - 1, got {} and {}",
                alphas.len(),
                betas.len()
            )));
        }
        if betas.iter().any(|b| !(*b >= 0.0)) {
            return Err(contract("off-diagonal entries must be nonnegative"));
        }
        Ok(Self { alphas, betas })
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// `β_j` (1-based, `2 <= j <= m`), the coupling between rows `j-1` and `j`.
    pub fn beta(&self, j: usize) -> f64 {
        self.betas[j - 2]
    }

    pub(crate) fn push(&mut self, alpha: f64, beta: f64) {
        if !self.alphas.is_empty() {
            self.betas.push(beta);
        }
        self.alphas.push(alpha);
    }

    /// Leading `k × k` block `T_k`.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.order() {
            return Err(contract(format!("leading block {k} of an order-{} matrix", self.order())));
        }
        Ok(Self { alphas: self.alphas[..k].to_vec(), betas: self.betas[..k - 1].to_vec() })
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let m = self.order();
        let mut d = vec![0.0; m * m];
        for (i, &a) in self.alphas.iter().enumerate() {
            d[i * m + i] = a;
        }
        for (i, &b) in self.betas.iter().enumerate() {
            d[i * m + i + 1] = b;
            d[(i + 1) * m + i] = b;
        }
        d
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.order())
            .map(|i| {
                let left = if i > 0 { self.betas[i - 1] } else { 0.0 };
                let right = self.betas.get(i).copied().unwrap_or(0.0);
                self.alphas[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }
}

/// Gauss quadrature rule of a Jacobi matrix: nodes `θ_k` ascending and first
/// eigenvector components `S_{1k}` (weights are their squares).
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagEigen {
    pub thetas: Vec<f64>,
    pub first_row: Vec<f64>,
}

impl TridiagEigen {
    /// `Σ_k S_{1k}² f(θ_k)`.
    pub fn quadrature<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<f64> {
        let mut acc = 0.0;
        for (&theta, &s) in self.thetas.iter().zip(&self.first_row) {
            let v = f(theta)?;
            if !v.is_finite() {
                return Err(Error::Domain { theta });
            }
            acc += s * s * v;
        }
        Ok(acc)
    }
}

/// Eigenvalues and first eigenvector row of `T` by implicit-shift QL.
pub fn tridiag_eigen(t: &SymTridiagonal) -> Result<TridiagEigen> {
    let m = t.order();
    if m == 0 {
        return Err(contract("empty tridiagonal"));
    }
    let mut z = vec![0.0; m];
    z[0] = 1.0;
    let mut d = t.alphas.clone();
    ql_implicit(&mut d, &t.betas, &mut z, 1)?;
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok(TridiagEigen {
        thetas: idx.iter().map(|&i| d[i]).collect(),
        first_row: idx.iter().map(|&i| z[i]).collect(),
    })
}

/// Full eigendecomposition; eigenvector `k` is column `k` of the returned row-major matrix.
pub fn tridiag_eigen_full(t: &SymTridiagonal) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = t.order();
    if m == 0 {
        return Err(contract("empty tridiagonal"));
    }
    let mut z = vec![0.0; m * m];
    for i in 0..m {
        z[i * m + i] = 1.0;
    }
    let mut d = t.alphas.clone();
    ql_implicit(&mut d, &t.betas, &mut z, m)?;
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let mut vecs = vec![0.0; m * m];
    for r in 0..m {
        for (c, &i) in idx.iter().enumerate() {
            vecs[r * m + c] = z[r * m + i];
        }
    }
    Ok((idx.iter().map(|&i| d[i]).collect(), vecs))
}

/// `e1ᵀ f(T) e1` via the Gauss rule of `T`.
pub fn quadrature_value<F: Fn(f64) -> Result<f64>>(t: &SymTridiagonal, f: F) -> Result<f64> {
    if t.order() == 1 {
        let theta = t.alphas[0];
        let v = f(theta)?;
        return if v.is_finite() { Ok(v) } else { Err(Error::Domain { theta }) };
    }
    tridiag_eigen(t)?.quadrature(f)
}

/// Implicit QL with Wilkinson shifts. `d` holds the diagonal on entry and the eigenvalues on
/// exit; rotations are applied to the columns of the `rows × m` row-major matrix `z`.
fn ql_implicit(d: &mut [f64], offdiag: &[f64], z: &mut [f64], rows: usize) -> Result<()> {
    let m = d.len();
    let mut e = vec![0.0; m];
    e[..m - 1].copy_from_slice(offdiag);
    for l in 0..m {
        let mut iter = 0;
        loop {
            let mut k = l;
            while k + 1 < m {
                let dd = d[k].abs() + d[k + 1].abs();
                if e[k].abs() <= f64::EPSILON * dd {
                    break;
                }
                k += 1;
            }
            if k == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::Numerical(format!(
                    "tridiagonal QL did not converge for eigenvalue {l} within {QL_MAX_ITER} iterations"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[k] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = k;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[k] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.chunks_exact_mut(m).take(rows) {
                    let zf = row[i + 1];
                    row[i + 1] = s * row[i] + c * zf;
                    row[i] = c * row[i] - s * zf;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[k] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: &[f64], b: &[f64]) -> SymTridiagonal {
        SymTridiagonal::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn shape_contracts() {
        assert!(SymTridiagonal::new(vec![1.0], vec![1.0]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 1.0], vec![-1.0]).is_err());
        assert!(tridiag_eigen(&SymTridiagonal::default()).is_err());
    }

    #[test]
    fn one_by_one() {
        let e = tridiag_eigen(&t(&[3.5], &[])).unwrap();
        assert_eq!(e.thetas, vec![3.5]);
        assert_eq!(e.first_row, vec![1.0]);
        assert_eq!(quadrature_value(&t(&[3.5], &[]), |x| Ok(x * x)).unwrap(), 12.25);
    }

    #[test]
    fn two_by_two_by_hand() {
        let tt = t(&[2.0, 2.0], &[1.0]);
        let e = tridiag_eigen(&tt).unwrap();
        assert!((e.thetas[0] - 1.0).abs() < 1e-15 && (e.thetas[1] - 3.0).abs() < 1e-15);
        for s in &e.first_row {
            assert!((s * s - 0.5).abs() < 1e-15);
        }
        assert!((quadrature_value(&tt, Ok).unwrap() - 2.0).abs() < 1e-14);
        assert!((quadrature_value(&tt, |x| Ok(x * x)).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn domain_error_names_theta() {
        let tt = t(&[2.0, 2.0], &[3.0]);
        match quadrature_value(&tt, |x| if x > 0.0 { Ok(x.ln()) } else { Err(Error::Domain { theta: x }) }) {
            Err(Error::Domain { theta }) => assert!((theta + 1.0).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weights_sum_to_one_and_vectors_are_eigenvectors() {
        let a: Vec<f64> = (0..30).map(|i| 2.0 + (i as f64 * 0.7).sin()).collect();
        let b: Vec<f64> = (0..29).map(|i| 0.5 + (i as f64 * 1.3).cos().abs()).collect();
        let tt = t(&a, &b);
        let e = tridiag_eigen(&tt).unwrap();
        let wsum: f64 = e.first_row.iter().map(|s| s * s).sum();
        assert!((wsum - 1.0).abs() < 1e-12);
        assert!(e.thetas.windows(2).all(|w| w[0] <= w[1]));

        let (vals, vecs) = tridiag_eigen_full(&tt).unwrap();
        let m = tt.order();
        let dense = tt.to_dense();
        for k in 0..m {
            assert!((vals[k] - e.thetas[k]).abs() < 1e-12);
            assert!((vecs[k].abs() - e.first_row[k].abs()).abs() < 1e-12);
            let res: f64 = (0..m)
                .map(|i| {
                    let tv: f64 = (0..m).map(|j| dense[i * m + j] * vecs[j * m + k]).sum();
                    (tv - vals[k] * vecs[i * m + k]).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10 * tt.norm_inf());
        }
    }

    #[test]
    fn zero_offdiagonal_splits() {
        let e = tridiag_eigen(&t(&[5.0, 1.0, 3.0], &[0.0, 0.0])).unwrap();
        assert_eq!(e.thetas, vec![1.0, 3.0, 5.0]);
        assert_eq!(e.first_row.iter().map(|s| s.abs()).collect::<Vec<_>>(), vec![0.0, 0.0, 1.0]);
    }
}
