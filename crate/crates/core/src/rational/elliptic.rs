//! Complete elliptic integral and Jacobi elliptic functions, real and complex argument.
//!
//! Parameters are passed together with their complements (`m` and `m1 = 1 - m`) so that
//! nearly singular maps keep full relative accuracy in the small quantity.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

const AGM_MAX: usize = 64;

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

/// `K(m)` for parameter `m`, given the complementary parameter `m1 = 1 - m`.
pub fn complete_k(m1: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, m1.sqrt())
}

/// `(sn, cn, dn)(u | m)` for real `u`, `0 <= m <= 1`, with `m1 = 1 - m`.
pub fn jacobi(u: f64, m: f64, m1: f64) -> (f64, f64, f64) {
    if m <= 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    if m1 <= 0.0 {
        let s = 1.0 / u.cosh();
        return (u.tanh(), s, s);
    }
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = m1.sqrt();
    while c.len() < AGM_MAX && c[c.len() - 1].abs() > f64::EPSILON * a[a.len() - 1] {
        let (an, bn) = (a[a.len() - 1], b);
        a.push(0.5 * (an + bn));
        c.push(0.5 * (an - bn));
        b = (an * bn).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (s, cphi) = phi.sin_cos();
    (s, cphi, (m1 + m * cphi * cphi).sqrt())
}

/// `(sn, cn, dn)(u + iv | m)` via the addition formulas.
pub fn jacobi_complex(u: f64, v: f64, m: f64, m1: f64) -> (Complex64, Complex64, Complex64) {
    let (s, c, d) = jacobi(u, m, m1);
    let (s1, c1, d1) = jacobi(v, m1, m);
    let den = c1 * c1 + m * s * s * s1 * s1;
    (
        Complex64::new(s * d1, c * d * s1 * c1) / den,
        Complex64::new(c * c1, -s * d * s1 * d1) / den,
        Complex64::new(d * c1 * d1, -m * s * c * s1) / den,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Incomplete integral F(φ | m) by composite Gauss–Legendre on 64 panels.
    fn incomplete_f(phi: f64, m: f64) -> f64 {
        let nodes = [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];
        let panels = 2000;
        let h = phi / panels as f64;
        (0..panels)
            .map(|p| {
                let mid = (p as f64 + 0.5) * h;
                nodes
                    .iter()
                    .map(|(x, w)| {
                        let t = mid + 0.5 * h * x;
                        w * 0.5 * h / (1.0 - m * t.sin().powi(2)).sqrt()
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    #[test]
    fn complete_integral_values() {
        assert!((complete_k(1.0) - FRAC_PI_2).abs() < 1e-15);
        assert!((complete_k(0.5) - 1.854_074_677_301_372).abs() < 1e-14);
        assert!((complete_k(0.1) - incomplete_f(FRAC_PI_2, 0.9)).abs() < 1e-10);
    }

    #[test]
    fn real_functions_invert_the_integral() {
        for &m in &[0.0, 0.3, 0.9, 0.999_9] {
            for &phi in &[0.1, 0.7, 1.3] {
                let u = incomplete_f(phi, m);
                let (s, c, d) = jacobi(u, m, 1.0 - m);
                assert!((s - phi.sin()).abs() < 1e-11, "m={m} phi={phi}");
                assert!((c - phi.cos()).abs() < 1e-11);
                assert!((d - (1.0 - m * phi.sin().powi(2)).sqrt()).abs() < 1e-11);
            }
        }
        let m1 = 1e-6;
        let k = complete_k(m1);
        let (s, c, d) = jacobi(k, 1.0 - m1, m1);
        assert!((s - 1.0).abs() < 1e-12 && c.abs() < 1e-6 && (d - m1.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn complex_identities() {
        for &(u, v, m) in &[(0.3, 0.8, 0.4), (-1.2, 0.5, 0.97), (2.0, 1.1, 0.01), (0.0, 0.9, 0.5)] {
            let (s, c, d) = jacobi_complex(u, v, m, 1.0 - m);
            assert!((s * s + c * c - 1.0).norm() < 1e-12);
            assert!((m * s * s + d * d - 1.0).norm() < 1e-12);
        }
        let (s, _, _) = jacobi_complex(0.0, 0.7, 0.5, 0.5);
        let (s1, c1, _) = jacobi(0.7, 0.5, 0.5);
        assert!((s - Complex64::new(0.0, s1 / c1)).norm() < 1e-14);
    }
}
