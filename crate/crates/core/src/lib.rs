//! Numerical laboratory for the hard-edge spectral statistics of random matrix
//! products `G (H - n x 1) G*`, where `H` is a GUE matrix and `G` is drawn from a
//! multiplicative Polya ensemble on the complex square matrices.

pub mod complexmath;
pub mod kernels;
pub mod polya;
pub mod quadrature;

pub use complexmath::Complex64;
pub use kernels::{
    ginibre_product_density, gue_kernel_finite, gue_macro, kpoint_correlation,
    polya_kernel_finite, polya_kernel_hard_edge, product_kernel_finite, product_kernel_limit,
    GueMacro, KernelError, KernelGrid, KernelGridMeta,
};
pub use polya::{MellinSpec, Order, PolyaError, PolyaTransforms};
