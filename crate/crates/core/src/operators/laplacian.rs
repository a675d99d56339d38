use serde::{Deserialize, Serialize};

use super::LinearOperator;
use crate::error::{contract, Result};

/// `A = I ⊗ L + L ⊗ I` on an `n1 × n2` grid with `L = tridiag(-1, 2, -1)`.
///
/// Unknowns are ordered lexicographically: grid point `(i1, i2)` has index `i1 + n1 * i2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Laplacian2D {
    pub n1: usize,
    pub n2: usize,
}

impl Laplacian2D {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(contract("grid dimensions must be positive"));
        }
        Ok(Self { n1, n2 })
    }
}

impl LinearOperator for Laplacian2D {
    fn dim(&self) -> usize {
        self.n1 * self.n2
    }

    fn apply_unchecked(&self, x: &[f64], y: &mut [f64]) {
        let n1 = self.n1;
        for (i2, (ycol, xcol)) in y.chunks_exact_mut(n1).zip(x.chunks_exact(n1)).enumerate() {
            let base = i2 * n1;
            for i1 in 0..n1 {
                let mut v = 4.0 * xcol[i1];
                if i1 > 0 {
                    v -= xcol[i1 - 1];
                }
                if i1 + 1 < n1 {
                    v -= xcol[i1 + 1];
                }
                if i2 > 0 {
                    v -= x[base + i1 - n1];
                }
                if i2 + 1 < self.n2 {
                    v -= x[base + i1 + n1];
                }
                ycol[i1] = v;
            }
        }
    }

    fn describe(&self) -> String {
        format!("laplacian2d({}x{})", self.n1, self.n2)
    }
}
