use std::cell::RefCell;

use num_complex::Complex64;

use super::KernelError;
use crate::polya::{PolyaError, PolyaTransforms};
use crate::quadrature::integrate_interval;

/// Finite-`n` kernel of the squared singular values of the Polya matrix:
/// `K_n(l1, l2) = int_0^1 p_{n-1}(l1 t) q_n(l2 t) dt`.
///
/// `l2` must lie in `(0, 1)` so the untruncated tilted integral for `q_n`
/// converges; `l1` only needs to be positive.
pub fn polya_kernel_finite(
    transforms: &PolyaTransforms,
    lam1: f64,
    lam2: f64,
) -> Result<f64, KernelError> {
    if transforms.spec.order.finite().is_none() {
        return Err(PolyaError::FiniteOrderRequired.into());
    }
    if !(lam1 > 0.0) {
        return Err(KernelError::Domain(format!("lambda_1 must be > 0, got {lam1}")));
    }
    if !(lam2 > 0.0 && lam2 < 1.0) {
        return Err(KernelError::Domain(format!(
            "lambda_2 must lie in (0, 1) for the tilted q_n integral, got {lam2}"
        )));
    }
    let stash: RefCell<Option<PolyaError>> = RefCell::new(None);
    let integrand = |t: f64| -> Complex64 {
        if stash.borrow().is_some() {
            return Complex64::new(0.0, 0.0);
        }
        let p = match transforms.p_poly(lam1 * t) {
            Ok(v) => v,
            Err(e) => {
                *stash.borrow_mut() = Some(e);
                return Complex64::new(0.0, 0.0);
            }
        };
        match transforms.qn_weight(lam2 * t) {
            Ok(q) => p * q,
            Err(e) => {
                *stash.borrow_mut() = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    // Outer tolerance sits above the inner quadrature noise floor.
    let value = integrate_interval(integrand, 0.0, 1.0, 10.0 * transforms.quad_tol)?;
    if let Some(e) = stash.into_inner() {
        return Err(e.into());
    }
    Ok(value.re)
}

/// Hard-edge limit of the Polya kernel:
/// `K_inf(y1, y2) = int_0^1 J_omega(i y1 t) Jtilde_omega(y2 t) dt`.
pub fn polya_kernel_hard_edge(
    transforms: &PolyaTransforms,
    y1: f64,
    y2: f64,
) -> Result<f64, KernelError> {
    if !transforms.spec.order.is_limit() {
        return Err(PolyaError::LimitOrderRequired.into());
    }
    if !(y1 > 0.0 && y2 > 0.0) {
        return Err(KernelError::Domain(format!(
            "hard-edge kernel needs y1, y2 > 0, got ({y1}, {y2})"
        )));
    }
    hard_edge_inner(transforms, y1, y2)
}

// Same integral with the first argument allowed on all of R, which the
// product-kernel limit needs for off-diagonal evaluations.
pub(crate) fn hard_edge_inner(
    transforms: &PolyaTransforms,
    y1: f64,
    y2: f64,
) -> Result<f64, KernelError> {
    let stash: RefCell<Option<PolyaError>> = RefCell::new(None);
    let integrand = |t: f64| -> Complex64 {
        if stash.borrow().is_some() {
            return Complex64::new(0.0, 0.0);
        }
        let j = transforms.jomega(Complex64::new(0.0, y1 * t));
        match transforms.jtilde(y2 * t) {
            Ok(jt) => j * jt,
            Err(e) => {
                *stash.borrow_mut() = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let value = integrate_interval(integrand, 0.0, 1.0, transforms.quad_tol)?;
    if let Some(e) = stash.into_inner() {
        return Err(e.into());
    }
    Ok(value.re)
}
