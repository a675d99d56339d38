//! Stochastic Lanczos quadrature for `tr(f(A))` with computable error certificates.
//!
//! Each probe `u` yields a bilinear-form sample `‖u‖² e1ᵀ f(T_m) e1`. A rational
//! surrogate of `f` drives an O(K)-per-step recurrence for the incremental quadrature
//! error, a lookback rule turns those increments into a stopping test, and the trace
//! estimate carries a confidence interval that absorbs the per-sample tolerance.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod function;
pub mod lanczos;
pub mod monitor;
pub mod operators;
pub mod oracles;
pub mod rational;
pub mod trace;

pub use error::{Error, Result};
pub use function::FunctionKind;
pub use lanczos::{LanczosConfig, LanczosState, ReorthMode, SymTridiagonal, TridiagEigen};
pub use monitor::{ErrorMonitor, Lookback, PoleState};
pub use operators::{Laplacian2D, LinearOperator, MaternOperator};
pub use rational::RationalApproximant;
pub use trace::{SampleRecord, TraceConfig, TraceEstimate};
