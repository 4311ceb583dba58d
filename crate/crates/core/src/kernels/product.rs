use std::cell::RefCell;

use num_complex::Complex64;

use super::gue::{gue_macro, ratio_factor};
use super::hard_edge::hard_edge_inner;
use super::{integrate_unit_cubic, KernelError};
use crate::complexmath::{bessel_i, bessel_j, bessel_k};
use crate::polya::{PolyaError, PolyaTransforms};
use crate::quadrature::GaussLegendre;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Finite-`n` kernel of the product `G (H - n x) G*` by the double contour
/// integral: `z'` on the unit circle, `z` on the real line shifted to
/// `R - i sign(a2)/n` so the `K_omega` argument stays off the cut.
///
/// Capped at `n <= 64`: the integrand carries `e^(n/2)`-sized factors and the
/// quadrature budget is tuned for that range.
pub fn product_kernel_finite(
    transforms: &PolyaTransforms,
    x: f64,
    a1: f64,
    a2: f64,
) -> Result<f64, KernelError> {
    let n = transforms
        .spec
        .order
        .finite()
        .ok_or(PolyaError::FiniteOrderRequired)? as usize;
    if n == 0 {
        return Err(KernelError::Domain("kernel order n must be >= 1".into()));
    }
    if n > 64 {
        return Err(KernelError::Domain(format!(
            "finite product kernel is capped at n = 64 (got {n}): e^(n/2) magnitude budget"
        )));
    }
    if a1 == 0.0 || a2 == 0.0 {
        return Err(KernelError::Domain("hard-edge arguments a1, a2 must be nonzero".into()));
    }
    let nf = n as f64;
    // The kernel is independent of the contour shift (the ratio factor is
    // entire in z and the cut is never crossed), so the shift is floored at
    // 0.04: at eps = 1/n the near-pole factor 1/(z' - z) sharpens beyond what
    // a fixed node budget resolves.
    let eps = (1.0 / nf).max(0.04);
    let sgn = a2.signum();
    let macro_data = gue_macro(x);
    let t_max = 4.0f64.max((80.0 / nf).sqrt()) * macro_data.saddle_plus.norm().max(1.0);

    // Node budget: resolve the e^{-n z^2/2} Gaussian, the e^{i n x z}
    // oscillation, the sqrt-frequency oscillation of K_omega(a2 z), and the
    // 1/(z' - z) feature of width eps where the contours meet.
    let nodes_per_unit = 48.0f64
        .max(12.0 * nf.sqrt())
        .max(1.4 * nf * x.abs())
        .max(1.4 * a2.abs())
        .max(16.0 / eps);
    let panels = ((2.0 * t_max * nodes_per_unit / 16.0).ceil() as usize).min(8192);
    let gl = GaussLegendre::new(16);
    let h = 2.0 * t_max / panels as f64;

    let mut m = 512usize;
    loop {
        // Distance of circle nodes from the shifted line; quadrature needs the
        // pole at z = z' (removable, but steep) kept away from the node set.
        let spacing = TWO_PI / m as f64;
        let min_dist = (0..m)
            .map(|k| {
                let theta = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / m as f64;
                (theta.sin() + sgn * eps).abs()
            })
            .fold(f64::INFINITY, f64::min);
        if min_dist >= 0.25 * spacing || m >= 8192 {
            break;
        }
        log::warn!(
            "circle node within {min_dist:.2e} of the z contour; doubling m to {}",
            2 * m
        );
        m *= 2;
    }

    let mut z_fac = Vec::with_capacity(panels * 16);
    let mut z_nodes = Vec::with_capacity(panels * 16);
    let mut z_pow = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        let lo = -t_max + p as f64 * h;
        for (xi, wi) in gl.nodes.iter().zip(&gl.weights) {
            let t = lo + 0.5 * h * (xi + 1.0);
            let z = Complex64::new(t, -sgn * eps);
            let weight = 0.5 * h * wi;
            let komega = transforms.komega(a2 * z)?;
            let expo = (-0.5 * nf * z * z - Complex64::new(0.0, nf * x) * z).exp();
            z_nodes.push(z);
            z_fac.push(weight * komega * expo);
            z_pow.push(z.powi(n as i32));
        }
    }

    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let theta = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / m as f64;
        let zp = Complex64::new(theta.cos(), theta.sin());
        let zp_pow = zp.powi(n as i32);
        let outer = zp
            * transforms.jomega(a1 * zp)
            * (0.5 * nf * zp * zp + Complex64::new(0.0, nf * x) * zp).exp();
        let mut inner = Complex64::new(0.0, 0.0);
        for j in 0..z_nodes.len() {
            inner += z_fac[j] * ratio_factor(z_nodes[j], zp, z_pow[j], zp_pow, n as u32);
        }
        total += outer * inner;
    }
    let value = total / (m as f64 * TWO_PI);
    debug_assert!(
        value.im.abs() <= 1e-7 * value.re.abs().max(1.0),
        "product kernel imaginary leak: {value}"
    );
    Ok(value.re)
}

/// Hard-edge limit of the product kernel (the limiting two-term form): a
/// rescaled Polya hard-edge kernel gated by the step function, plus the
/// chord integral of `J_omega K_omega` against the semicircle weight.
pub fn product_kernel_limit(
    transforms: &PolyaTransforms,
    x: f64,
    a1: f64,
    a2: f64,
) -> Result<f64, KernelError> {
    if !transforms.spec.order.is_limit() {
        return Err(PolyaError::LimitOrderRequired.into());
    }
    if a1 == 0.0 || a2 == 0.0 {
        return Err(KernelError::Domain("hard-edge arguments a1, a2 must be nonzero".into()));
    }
    let macro_data = gue_macro(x);
    let re_g = macro_data.green.re;
    let rho = macro_data.density;

    // Theta(-Re G(x) a2) |Re G| K^G_inf(-Re G a1, |Re G a2|); the step function
    // vanishes for non-positive arguments.
    let mut value = 0.0;
    if -re_g * a2 > 0.0 {
        value += re_g.abs() * hard_edge_inner(transforms, -re_g * a1, (re_g * a2).abs())?;
    }

    if rho > 0.0 {
        let pi_rho = std::f64::consts::PI * rho;
        let stash: RefCell<Option<PolyaError>> = RefCell::new(None);
        let half = |sign: f64| -> Result<Complex64, KernelError> {
            // t = sign * tau^3 softens the integrable singularity where the
            // K_omega argument meets its cut at t = 0.
            let r = integrate_unit_cubic(
                |tau| {
                    if stash.borrow().is_some() {
                        return Complex64::new(0.0, 0.0);
                    }
                    let u = Complex64::new(sign * pi_rho * tau, -re_g);
                    let j = transforms.jomega(a1 * u);
                    match transforms.komega(a2 * u) {
                        Ok(k) => j * k,
                        Err(e) => {
                            *stash.borrow_mut() = Some(e);
                            Complex64::new(0.0, 0.0)
                        }
                    }
                },
                transforms.quad_tol,
            )?;
            if let Some(e) = stash.borrow_mut().take() {
                return Err(e.into());
            }
            Ok(r)
        };
        let chord = half(1.0)? + half(-1.0)?;
        debug_assert!(
            chord.im.abs() <= 1e-7 * chord.re.abs().max(1.0),
            "chord integral imaginary leak: {chord}"
        );
        value += rho * 0.5 * chord.re;
    }
    Ok(value)
}

/// Hard-edge density of the Ginibre (charge 0) product ensemble: the explicit
/// two-term Bessel formula, equal to `product_kernel_limit` on the diagonal.
pub fn ginibre_product_density(x: f64, a: f64) -> Result<f64, KernelError> {
    if a == 0.0 {
        return Err(KernelError::Domain("density argument a must be nonzero".into()));
    }
    let macro_data = gue_macro(x);
    let re_g = macro_data.green.re;
    let rho = macro_data.density;

    let mut value = 0.0;
    if -x * a > 0.0 && re_g.abs() > 0.0 {
        let y = (re_g * a).abs();
        let bessel_sq = crate::quadrature::integrate_interval(
            |t| {
                let j = bessel_j(0, Complex64::new(2.0 * (y * t).sqrt(), 0.0)).re;
                Complex64::new(j * j, 0.0)
            },
            0.0,
            1.0,
            1e-10,
        )?;
        value += re_g.abs() * bessel_sq.re;
    }

    if x.abs() < 2.0 {
        let s = (4.0 - x * x).sqrt();
        let half = |sign: f64| -> Result<Complex64, KernelError> {
            let r = integrate_unit_cubic(
                |tau| {
                    let w = Complex64::new(2.0 * x * a, sign * 2.0 * s * a * tau).sqrt();
                    let k = bessel_k(0, w).expect("sqrt maps off-cut points into Re > 0");
                    bessel_i(0, w) * k
                },
                1e-10,
            )?;
            Ok(r)
        };
        let chord = half(1.0)? + half(-1.0)?;
        debug_assert!(
            chord.im.abs() <= 1e-8 * chord.re.abs().max(1.0),
            "I0 K0 integral imaginary leak: {chord}"
        );
        value += rho * chord.re;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polya::{MellinSpec, Order};
    use approx::assert_relative_eq;

    fn ginibre_limit() -> PolyaTransforms {
        PolyaTransforms::new(MellinSpec::ginibre(0, Order::Limit))
    }

    #[test]
    fn limit_vanishes_outside_support_on_positive_side() {
        let t = ginibre_limit();
        let v = product_kernel_limit(&t, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(ginibre_product_density(3.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn limit_outside_support_reduces_to_rescaled_hard_edge() {
        // At x = 3 the semicircle term vanishes identically, so the limit
        // must equal the pure rescaled hard-edge kernel code path exactly.
        let t = ginibre_limit();
        let g = 0.381_966_011_250_105f64; // Re G(3)
        let v = product_kernel_limit(&t, 3.0, -1.0, -1.0).unwrap();
        let w = g * polya_kernel_hard_edge_diag(&t, g);
        assert_relative_eq!(v, w, max_relative = 1e-10);
    }

    fn polya_kernel_hard_edge_diag(t: &PolyaTransforms, y: f64) -> f64 {
        crate::kernels::polya_kernel_hard_edge(t, y, y).unwrap()
    }

    #[test]
    fn limit_symmetric_at_origin() {
        let t = ginibre_limit();
        let plus = product_kernel_limit(&t, 0.0, 1.0, 1.0).unwrap();
        let minus = product_kernel_limit(&t, 0.0, -1.0, -1.0).unwrap();
        assert_relative_eq!(plus, minus, max_relative = 1e-8);
    }

    #[test]
    fn density_dual_route_spot_checks() {
        let t = ginibre_limit();
        for &(x, a) in &[(0.0, 1.0), (1.0, -1.0), (1.0, 2.0), (2.0, -0.5), (3.0, -2.0)] {
            let d = ginibre_product_density(x, a).unwrap();
            let k = product_kernel_limit(&t, x, a, a).unwrap();
            assert!((d - k).abs() <= 1e-6, "x={x} a={a}: {d} vs {k}");
        }
    }

    #[test]
    fn density_log_growth_toward_origin() {
        let near = ginibre_product_density(0.0, 1e-3).unwrap();
        let far = ginibre_product_density(0.0, 1e-1).unwrap();
        assert!(near > far, "K0 log singularity should grow toward a = 0: {near} vs {far}");
    }

    #[test]
    fn finite_kernel_diagonal_positive() {
        let t = PolyaTransforms::new(MellinSpec::ginibre(0, Order::Finite(16)));
        let v = product_kernel_finite(&t, 1.0, -1.0, -1.0).unwrap();
        assert!(v > 0.0, "one-point density must be positive, got {v}");
    }

    #[test]
    fn finite_kernel_order_cap() {
        let t = PolyaTransforms::new(MellinSpec::ginibre(0, Order::Finite(128)));
        assert!(product_kernel_finite(&t, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn finite_kernel_rejects_zero_arguments() {
        let t = PolyaTransforms::new(MellinSpec::ginibre(0, Order::Finite(8)));
        assert!(product_kernel_finite(&t, 1.0, 0.0, 1.0).is_err());
        let tl = ginibre_limit();
        assert!(product_kernel_limit(&tl, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn finite_kernel_approaches_limit() {
        // n = 16, 32, 64 at (x, a) = (1, -2): gap to the limiting kernel shrinks
        let limit = product_kernel_limit(&ginibre_limit(), 1.0, -2.0, -2.0).unwrap();
        let mut prev_gap = f64::INFINITY;
        for n in [16u32, 32, 64] {
            let t = PolyaTransforms::new(MellinSpec::ginibre(0, Order::Finite(n)));
            let v = product_kernel_finite(&t, 1.0, -2.0, -2.0).unwrap();
            let gap = (v - limit).abs();
            assert!(gap < prev_gap, "gap not shrinking at n={n}: {gap} vs {prev_gap}");
            prev_gap = gap;
        }
        assert!(prev_gap < 0.05);
    }
}
