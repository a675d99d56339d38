//! Trapezoid-rule rational approximants from contour integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::elliptic::{complete_k, jacobi, jacobi_complex};

/// Poles (one per conjugate pair), halved-form coefficients and additive constant.
pub(crate) type Terms = (Vec<Complex64>, Vec<Complex64>, f64);

/// Nodes `ζ_j` and `dζ/dt · h` of the trapezoid rule on the conformal map of an annulus onto
/// the plane slit along `(-∞, 0]`, for the interval `[lo, hi]`.
fn annulus_nodes(lo: f64, hi: f64, n: usize) -> Vec<(Complex64, Complex64)> {
    let r = (hi / lo).sqrt();
    let k = (r - 1.0) / (r + 1.0);
    let k2 = k * k;
    let kp2 = 4.0 * r / ((r + 1.0) * (r + 1.0));
    let kk = complete_k(kp2);
    let kkp = complete_k(k2);
    let h = 2.0 * kk / n as f64;
    let scale = (lo * hi).sqrt();
    let inv_k = 1.0 / k;
    (0..n)
        .map(|j| {
            let t = -kk + (j as f64 + 0.5) * h;
            let (sn, cn, dn) = jacobi_complex(t, 0.5 * kkp, k2, kp2);
            let den = inv_k - sn;
            let zeta = scale * (inv_k + sn) / den;
            let dzeta = scale * 2.0 * inv_k * cn * dn / (den * den);
            (zeta, dzeta * h)
        })
        .collect()
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// `f(x) ≈ x · Re Σ 2 h g(z) z'/(2πi) / (x - z)` rewritten as `C + Re Σ c z/(x - z)`,
/// with `g(z) = f(z)/z`. Used for `tanh(√x)`.
pub(crate) fn method1_times_x(lo: f64, hi: f64, n: usize, g: impl Fn(Complex64) -> Complex64) -> Terms {
    let mut poles = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    let mut constant = 0.0;
    for (z, dzh) in annulus_nodes(lo, hi, n) {
        let c = 2.0 * g(z) * dzh / two_pi_i();
        constant += c.re;
        poles.push(z);
        coeffs.push(c * z);
    }
    (poles, coeffs, constant)
}

/// Same rewrite with the map applied in the `w = √z` plane; `big_f(w) = f(w²)/w²`. Used for `log`.
pub(crate) fn method2_times_x(lo: f64, hi: f64, n: usize, big_f: impl Fn(Complex64) -> Complex64) -> Terms {
    let mut poles = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    let mut constant = 0.0;
    for (w, dwh) in annulus_nodes(lo.sqrt(), hi.sqrt(), n) {
        let z = w * w;
        let c = 2.0 * big_f(w) * 2.0 * w * dwh / two_pi_i();
        constant += c.re;
        poles.push(z);
        coeffs.push(c * z);
    }
    (poles, coeffs, constant)
}

/// `√x = (2x/π) ∫_0^∞ dt/(t² + x)` with `t = √lo · sc(u | 1 - lo/hi)`, midpoint rule in `u`.
pub(crate) fn method3_sqrt(lo: f64, hi: f64, n: usize) -> Terms {
    let m1 = lo / hi;
    let m = 1.0 - m1;
    let kk = complete_k(m1);
    let mut poles = Vec::with_capacity(n);
    let mut coeffs = Vec::with_capacity(n);
    let mut constant = 0.0;
    for j in 0..n {
        let u = (j as f64 + 0.5) * kk / n as f64;
        let (sn, cn, dn) = jacobi(u, m, m1);
        let a = (2.0 / PI) * (kk / n as f64) * lo.sqrt() * dn / (cn * cn);
        let p = -lo * (sn / cn).powi(2);
        constant += a;
        poles.push(Complex64::new(p, 0.0));
        coeffs.push(Complex64::new(a * p, 0.0));
    }
    (poles, coeffs, constant)
}

/// Trapezoid rule on a parabolic contour for `exp(-x)` with `k` retained terms.
pub(crate) fn parabolic_exp_neg(k: usize) -> Terms {
    let n = 2 * k;
    let nf = n as f64;
    let mut poles = Vec::with_capacity(k);
    let mut coeffs = Vec::with_capacity(k);
    for j in 0..n {
        let theta = PI * (2.0 * j as f64 + 1.0 - nf) / nf;
        let z = nf * Complex64::new(0.1309 - 0.1194 * theta * theta, 0.25 * theta);
        let dz = nf * Complex64::new(-2.0 * 0.1194 * theta, 0.25);
        let c = -z.exp() * dz / Complex64::new(0.0, nf);
        let pole = -z;
        if pole.im > 0.0 {
            poles.push(pole);
            coeffs.push(-2.0 * c);
        }
    }
    (poles, coeffs, 0.0)
}
