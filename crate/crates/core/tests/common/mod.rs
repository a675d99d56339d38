#![allow(dead_code)]

use lanczos_trace::lanczos::{tridiag_eigen, LanczosConfig, LanczosState, ReorthMode, SymTridiagonal};
use lanczos_trace::monitor::ErrorMonitor;
use lanczos_trace::operators::LinearOperator;
use lanczos_trace::RationalApproximant;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `Q diag(λ) Qᵀ` with log-uniform eigenvalues in `[lo, hi]`; returns (row-major data, eigenvalues).
pub fn random_spd(n: usize, seed: u64, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(n, n, |_, _| rng.gen::<f64>() - 0.5);
    let q = g.qr().q();
    let mut eig: Vec<f64> = (0..n).map(|_| lo * (hi / lo).powf(rng.gen::<f64>())).collect();
    eig[0] = lo;
    eig[n - 1] = hi;
    let a = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig.clone())) * q.transpose();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    (data, eig)
}

pub fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen::<f64>() - 0.5).collect()
}

/// Runs `steps` Lanczos steps feeding an error monitor; returns `T_steps` and `d_1..d_{steps-1}`.
pub fn run_monitored(
    op: &dyn LinearOperator,
    u: &[f64],
    r: &RationalApproximant,
    steps: usize,
    mode: ReorthMode,
) -> (SymTridiagonal, Vec<f64>) {
    let mut state = LanczosState::new(op, u, LanczosConfig::new(mode, steps)).unwrap();
    let mut monitor = ErrorMonitor::new(r, 0.1, 0.0).unwrap();
    let mut beta = 0.0;
    while state.order() < steps {
        let s = state.step().unwrap();
        monitor.push_step(s.alpha, beta).unwrap();
        beta = s.beta_next;
        if s.breakdown {
            break;
        }
    }
    (state.tridiag().clone(), monitor.history().to_vec())
}

/// `e1ᵀ g(T) e1` by eigendecomposition.
pub fn quad<G: Fn(f64) -> f64>(t: &SymTridiagonal, g: G) -> f64 {
    let e = tridiag_eigen(t).unwrap();
    e.thetas.iter().zip(&e.first_row).map(|(th, s)| s * s * g(*th)).sum()
}
