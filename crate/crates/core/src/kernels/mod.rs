//! Analytic correlation kernels and densities.
//!
//! The GUE side: macroscopic data (Green function, semicircle, saddle points)
//! and the finite-`n` double-contour kernel. The Polya side: the finite-`n`
//! kernel of the squared singular values and its hard-edge limit. The product
//! side: the finite-`n` kernel of `G (H - n x) G*` and its hard-edge limit,
//! with the Ginibre charge-0 case also available as an explicit two-term
//! Bessel density. `k`-point correlations come out of these kernels as small
//! determinants.

mod correlation;
mod gue;
mod hard_edge;
mod product;

pub use correlation::{kpoint_correlation, KernelGrid, KernelGridMeta};
pub use gue::{gue_kernel_finite, gue_macro, GueMacro};
pub use hard_edge::{polya_kernel_finite, polya_kernel_hard_edge};
pub use product::{ginibre_product_density, product_kernel_finite, product_kernel_limit};

use thiserror::Error;

use crate::complexmath::MathError;
use crate::polya::PolyaError;
use crate::quadrature::QuadError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Polya(#[from] PolyaError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Math(#[from] MathError),
}

/// Integrate `f` over `[0, 1]` with the cubic substitution `t = tau^3`,
/// which flattens the integrable (logarithmic) singularities the kernel
/// integrands can carry at `t = 0`.
pub(crate) fn integrate_unit_cubic<F>(f: F, tol: f64) -> Result<num_complex::Complex64, QuadError>
where
    F: Fn(f64) -> num_complex::Complex64,
{
    crate::quadrature::integrate_interval(
        |tau| 3.0 * tau * tau * f(tau * tau * tau),
        0.0,
        1.0,
        tol,
    )
}
