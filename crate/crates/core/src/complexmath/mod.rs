//! Complex special functions: principal-branch log-Gamma and integer-order
//! Bessel functions `J`, `I`, `K` for real and complex arguments.
//!
//! Everything here is branch-disciplined: `arg` lies in `(-pi, pi]` and `sqrt`
//! and `log` cut along the negative real axis (the `num_complex` convention).
//! Accuracy targets are roughly 1e-12 for log-Gamma, 1e-10 for `J`/`I` and
//! 1e-8 for `K` on the argument ranges the kernel quadratures visit.

mod bessel;
mod gamma;

pub use bessel::{bessel_i, bessel_j, bessel_k};
pub use gamma::{cgamma, cgamma_ln};
pub use num_complex::Complex64;

use thiserror::Error;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("Gamma pole at non-positive integer {0}")]
    GammaPole(f64),
    #[error("K_nu requires Re(z) > 0, got {0}")]
    BesselKDomain(Complex64),
}

/// `i` as a `Complex64`.
#[inline]
pub fn imag_unit() -> Complex64 {
    Complex64::new(0.0, 1.0)
}
