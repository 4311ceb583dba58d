//! The multiplicative Polya-ensemble transform layer.
//!
//! A Polya weight `omega^(n)` enters every kernel only through its Mellin
//! transform `M omega^(n)(s)`. [`MellinSpec`] carries that data (as a
//! log-space evaluator, so `Gamma`-sized values never overflow) together with
//! the contour tilt angle and markers for Bessel closed forms. On top of it,
//! [`PolyaTransforms`] evaluates
//!
//! - the polynomial `chi^(n)(z) = sum_j z^j / M(j+1)`,
//! - the entire function `J omega(z) = sum_j (iz)^j / (j! M(j+1))`,
//! - the cut function `K omega(z)` (Mellin-Barnes integral, holomorphic off
//!   the half line `i R+`),
//! - the cut discontinuity `Jtilde omega(y)`, and
//! - the weight `q_n(lambda)` of the finite-`n` kernel,
//!
//! the last three by straight or tilted-ray contour quadrature. The two
//! admissibility conditions on the Mellin transform are exposed as runtime
//! diagnostics that warn rather than fail: they are sufficient conditions,
//! not checked-necessary ones.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexmath::{bessel_j, bessel_k, cgamma_ln, imag_unit, MathError};
use crate::quadrature::{integrate_interval, integrate_tilted_rays, QuadError};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyaError {
    #[error("K_omega is cut along i*R+; argument {0} lies on the cut")]
    OnCut(Complex64),
    #[error("operation requires a finite matrix order, spec has n = infinity")]
    FiniteOrderRequired,
    #[error("operation requires the n = infinity limit spec")]
    LimitOrderRequired,
    #[error("domain error: {0}")]
    InvalidDomain(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Math(#[from] MathError),
}

/// Matrix order carried by a [`MellinSpec`]: finite `n` or the hard-edge limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Limit,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Limit => None,
        }
    }

    pub fn is_limit(self) -> bool {
        matches!(self, Order::Limit)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "n={n}"),
            Order::Limit => write!(f, "n=inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `omega(lambda) = lambda^nu e^(-lambda)`, Mellin transform `Gamma(s + nu)`.
    GinibreCharge { nu: u32 },
    Custom { label: String },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::GinibreCharge { nu } => write!(f, "ginibre-nu{nu}"),
            Family::Custom { label } => write!(f, "custom:{label}"),
        }
    }
}

/// Which transform functions have valid Bessel shortcuts for this spec.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClosedForms {
    pub jomega: bool,
    pub komega: bool,
    pub jtilde: bool,
}

/// Description of a Polya weight through its Mellin transform.
///
/// Immutable after construction; evaluators are pure and the struct is freely
/// shared across threads.
#[derive(Clone)]
pub struct MellinSpec {
    pub family: Family,
    pub order: Order,
    /// Contour tilt angle `theta` in `(0, pi/2)`; default `pi/4`.
    pub tilt: f64,
    pub closed_forms: ClosedForms,
    mellin_ln: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
}

impl fmt::Debug for MellinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MellinSpec")
            .field("family", &self.family)
            .field("order", &self.order)
            .field("tilt", &self.tilt)
            .field("closed_forms", &self.closed_forms)
            .finish()
    }
}

impl MellinSpec {
    /// Ginibre family with charge `nu`, Bessel closed forms enabled.
    pub fn ginibre(nu: u32, order: Order) -> Self {
        let mut spec = Self::ginibre_quadrature(nu, order);
        spec.closed_forms = ClosedForms { jomega: true, komega: true, jtilde: true };
        spec
    }

    /// Ginibre family evaluated through the generic contour quadrature only.
    /// Exists so the closed forms have an independent route to test against.
    pub fn ginibre_quadrature(nu: u32, order: Order) -> Self {
        MellinSpec {
            family: Family::GinibreCharge { nu },
            order,
            tilt: std::f64::consts::FRAC_PI_4,
            closed_forms: ClosedForms::default(),
            mellin_ln: Arc::new(move |s| {
                cgamma_ln(s + nu as f64).expect("Mellin contour avoids Gamma poles")
            }),
        }
    }

    /// User-supplied Mellin data. `mellin_ln` must return `ln M omega(s)`.
    pub fn custom(
        label: impl Into<String>,
        order: Order,
        mellin_ln: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    ) -> Self {
        MellinSpec {
            family: Family::Custom { label: label.into() },
            order,
            tilt: std::f64::consts::FRAC_PI_4,
            closed_forms: ClosedForms::default(),
            mellin_ln,
        }
    }

    pub fn with_tilt(mut self, tilt: f64) -> Self {
        assert!(
            tilt > 0.0 && tilt < std::f64::consts::FRAC_PI_2,
            "tilt angle must lie in (0, pi/2)"
        );
        self.tilt = tilt;
        self
    }

    /// `ln M omega(s)`.
    pub fn mellin_ln(&self, s: Complex64) -> Complex64 {
        (self.mellin_ln)(s)
    }

    /// `M omega(s)`.
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        self.mellin_ln(s).exp()
    }

    /// Reported constant of the first admissibility condition:
    /// `max_j 1/M omega(j)` over the integer grid `j = 1..=min(n, 64)`.
    pub fn assump1_bound(&self) -> f64 {
        let cap = match self.order {
            Order::Finite(n) => n.min(64),
            Order::Limit => 64,
        };
        (1..=cap)
            .map(|j| (-self.mellin_ln(Complex64::new(j as f64, 0.0))).exp().norm())
            .fold(0.0, f64::max)
    }

    /// Numerical diagnostic of both admissibility conditions on a coarse grid.
    /// Violations warn; they do not error (the conditions are sufficient, not
    /// necessary).
    pub fn check_conditions(&self) -> ConditionsReport {
        let c_tilde = self.assump1_bound();
        if !c_tilde.is_finite() {
            log::warn!("condition (1) diagnostic: 1/M omega(j) unbounded on the integer grid");
        }
        let mut sup: f64 = 0.0;
        let mut bounded = true;
        for &angle in &[1.75_f64, 2.2, 2.7, 3.05] {
            let dir = Complex64::from_polar(1.0, angle);
            let near = self.mellin(Complex64::new(1.0, 0.0) + dir).norm();
            let far = self.mellin(Complex64::new(1.0, 0.0) + 50.0 * dir).norm();
            sup = sup.max(near).max(far);
            if far > 1e3 * near.max(1.0) {
                bounded = false;
            }
        }
        if !bounded {
            log::warn!(
                "condition (2) diagnostic: |M omega(1+z)| grows along tilted rays (family {})",
                self.family
            );
        }
        ConditionsReport { c_tilde, ray_sup: sup, assump2_bounded: bounded }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionsReport {
    pub c_tilde: f64,
    pub ray_sup: f64,
    pub assump2_bounded: bool,
}

/// Evaluator bundle for the transform functions of one [`MellinSpec`].
#[derive(Clone)]
pub struct PolyaTransforms {
    pub spec: MellinSpec,
    /// Series cap for the `n = infinity` entire function.
    pub series_terms: usize,
    /// Quadrature tolerance for every contour integral in here.
    pub quad_tol: f64,
    jomega_coeffs: OnceLock<Vec<Complex64>>,
    p_coeffs: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for PolyaTransforms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolyaTransforms")
            .field("spec", &self.spec)
            .field("series_terms", &self.series_terms)
            .field("quad_tol", &self.quad_tol)
            .finish()
    }
}

impl PolyaTransforms {
    pub fn new(spec: MellinSpec) -> Self {
        PolyaTransforms {
            spec,
            series_terms: 220,
            quad_tol: 1e-9,
            jomega_coeffs: OnceLock::new(),
            p_coeffs: OnceLock::new(),
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }

    fn mellin_ln_at(&self, s: f64) -> Complex64 {
        self.spec.mellin_ln(Complex64::new(s, 0.0))
    }

    // 1/(j! M(j+1)) by running products; underflows to zero harmlessly for
    // large j, which terminates the series naturally.
    fn jomega_coeffs(&self) -> &[Complex64] {
        self.jomega_coeffs.get_or_init(|| {
            let cap = match self.spec.order {
                Order::Finite(n) => n as usize,
                Order::Limit => self.series_terms,
            };
            let mut coeffs = Vec::with_capacity(cap);
            let mut c = (-self.mellin_ln_at(1.0)).exp();
            coeffs.push(c);
            for j in 1..cap {
                let ratio = (self.mellin_ln_at(j as f64) - self.mellin_ln_at(j as f64 + 1.0)).exp();
                c = c * ratio / j as f64;
                coeffs.push(c);
            }
            coeffs
        })
    }

    // binom(n-1, j) / M(j+1), finite order only.
    fn p_coeffs(&self) -> &[Complex64] {
        self.p_coeffs.get_or_init(|| {
            let n = self.spec.order.finite().expect("p polynomial needs finite n") as usize;
            let mut coeffs = Vec::with_capacity(n);
            let mut c = (-self.mellin_ln_at(1.0)).exp();
            coeffs.push(c);
            for j in 1..n {
                let ratio = (self.mellin_ln_at(j as f64) - self.mellin_ln_at(j as f64 + 1.0)).exp();
                c = c * ratio * ((n - j) as f64 / j as f64);
                coeffs.push(c);
            }
            coeffs
        })
    }

    /// The polynomial `chi^(n)(z) = sum_{j=0}^{n-1} z^j / M omega(j+1)`.
    pub fn chi(&self, z: Complex64) -> Result<Complex64, PolyaError> {
        let n = self.spec.order.finite().ok_or(PolyaError::FiniteOrderRequired)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (0..n).rev() {
            let c = (-self.mellin_ln_at(j as f64 + 1.0)).exp();
            acc = acc * z + c;
        }
        Ok(acc)
    }

    /// Entire function `J omega(z) = sum_j (iz)^j / (j! M omega(j+1))`,
    /// truncated at `n - 1` for finite order and at series convergence for
    /// the limit spec.
    pub fn jomega(&self, z: Complex64) -> Complex64 {
        let coeffs = self.jomega_coeffs();
        let iz = imag_unit() * z;
        let mut power = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        let limit = self.spec.order.is_limit();
        let mut last_term = 0.0;
        for (j, &c) in coeffs.iter().enumerate() {
            let term = c * power;
            sum += term;
            last_term = term.norm();
            if limit && j > 4 && last_term <= 1e-17 * sum.norm().max(1e-120) {
                return sum;
            }
            power *= iz;
        }
        if limit && last_term > self.quad_tol / 10.0 {
            log::warn!(
                "J omega series cap {} reached with last term {last_term:.2e} at |z| = {:.2}",
                self.series_terms,
                z.norm()
            );
        }
        sum
    }

    /// `p_{n-1}(lambda)`, the binomial-weighted polynomial of the finite-`n`
    /// kernel.
    pub fn p_poly(&self, lam: f64) -> Result<Complex64, PolyaError> {
        if self.spec.order.finite().is_none() {
            return Err(PolyaError::FiniteOrderRequired);
        }
        let coeffs = self.p_coeffs();
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * (-lam) + c;
        }
        Ok(acc)
    }

    /// `K omega(z)`: the Fourier-Laplace transform of the weight, holomorphic
    /// off the cut `i R+`. Straight-line Mellin-Barnes contour where it
    /// converges fast (`|arg(iz)| <= pi/4`), tilted rays elsewhere.
    pub fn komega(&self, z: Complex64) -> Result<Complex64, PolyaError> {
        if z.re == 0.0 && z.im >= 0.0 {
            return Err(PolyaError::OnCut(z));
        }
        if self.spec.closed_forms.komega {
            if let Family::GinibreCharge { nu } = &self.spec.family {
                let root = (imag_unit() * z).sqrt();
                let k = bessel_k(*nu, 2.0 * root)?;
                return Ok(2.0 * root.powi(*nu as i32) * k);
            }
        }
        let tol = self.quad_tol;
        let log_iz = (imag_unit() * z).ln();
        let f = |w: Complex64| -> Complex64 {
            let Ok(lg) = cgamma_ln(1.0 + imag_unit() * w) else {
                return Complex64::new(0.0, 0.0);
            };
            let expo = self.spec.mellin_ln(1.0 + imag_unit() * w)
                + lg
                + (-imag_unit() * w - 1.0) * log_iz;
            expo.exp() / TWO_PI
        };
        let phi = (imag_unit() * z).arg();
        if phi.abs() <= std::f64::consts::FRAC_PI_4 {
            let rate = std::f64::consts::FRAC_PI_2 - phi.abs();
            let s_max = ((1.0 / tol).ln() + 15.0) / rate + 10.0;
            let re_line = |s: f64| f(Complex64::new(s, 0.0));
            Ok(integrate_interval(re_line, -s_max, 0.0, 0.5 * tol)?
                + integrate_interval(re_line, 0.0, s_max, 0.5 * tol)?)
        } else {
            let s_max = 40.0 + 10.0 * (1.0 / tol).ln();
            Ok(integrate_tilted_rays(f, self.spec.tilt, s_max, tol)?)
        }
    }

    /// Cut discontinuity `Jtilde omega(y) = lim (i/2pi)[K(iy+eps) - K(iy-eps)]`
    /// for `y > 0`, evaluated through the tilted-ray representation.
    pub fn jtilde(&self, y: f64) -> Result<f64, PolyaError> {
        if !(y > 0.0) {
            return Err(PolyaError::InvalidDomain(format!("jtilde needs y > 0, got {y}")));
        }
        if self.spec.closed_forms.jtilde {
            if let Family::GinibreCharge { nu } = &self.spec.family {
                let root = y.sqrt();
                return Ok(root.powi(*nu as i32) * bessel_j(*nu, Complex64::new(2.0 * root, 0.0)).re);
            }
        }
        let tol = self.quad_tol;
        let ln_y = y.ln();
        let f = |w: Complex64| -> Complex64 {
            let Ok(lg_neg) = cgamma_ln(-imag_unit() * w) else {
                return Complex64::new(0.0, 0.0);
            };
            let expo = self.spec.mellin_ln(1.0 + imag_unit() * w) - lg_neg
                + (-imag_unit() * w - 1.0) * ln_y;
            expo.exp() / TWO_PI
        };
        let s_max = 40.0 + 10.0 * (1.0 / tol).ln();
        let v = integrate_tilted_rays(f, self.spec.tilt, s_max, tol)?;
        debug_assert!(v.im.abs() < 1e-7 * v.re.abs().max(1.0), "jtilde imaginary leak {v}");
        Ok(v.re)
    }

    /// The weight `q_n(lambda)` of the finite-`n` kernel, via the tilted-ray
    /// Mellin-Barnes integral. Converges for `lambda` in `(0, 1)`, which is
    /// all the `t`-integral of the kernel ever requests.
    pub fn qn_weight(&self, lam: f64) -> Result<f64, PolyaError> {
        let n = self.spec.order.finite().ok_or(PolyaError::FiniteOrderRequired)? as f64;
        if !(lam > 0.0) {
            return Err(PolyaError::InvalidDomain(format!("q_n needs lambda > 0, got {lam}")));
        }
        if lam >= 1.0 {
            return Err(PolyaError::InvalidDomain(format!(
                "q_n tilted contour diverges for lambda >= 1, got {lam}"
            )));
        }
        let tol = self.quad_tol;
        let ln_lam = lam.ln();
        let lg_n = cgamma_ln(Complex64::new(n, 0.0)).expect("n >= 1");
        let f = |w: Complex64| -> Complex64 {
            let iw = imag_unit() * w;
            let (Ok(lg_top), Ok(lg_neg)) = (cgamma_ln(n - iw), cgamma_ln(-iw)) else {
                return Complex64::new(0.0, 0.0);
            };
            let expo = lg_top - lg_n + self.spec.mellin_ln(1.0 + iw) - lg_neg
                + (-iw - 1.0) * ln_lam;
            expo.exp() / TWO_PI
        };
        let s_max = 40.0 + 10.0 * (1.0 / tol).ln();
        let v = integrate_tilted_rays(f, self.spec.tilt, s_max, tol)?;
        debug_assert!(v.im.abs() < 1e-7 * v.re.abs().max(1.0), "q_n imaginary leak {v}");
        Ok(v.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ginibre(nu: u32, order: Order) -> PolyaTransforms {
        PolyaTransforms::new(MellinSpec::ginibre(nu, order))
    }

    fn ginibre_quad(nu: u32, order: Order) -> PolyaTransforms {
        PolyaTransforms::new(MellinSpec::ginibre_quadrature(nu, order))
    }

    #[test]
    fn chi_trivial_cases() {
        let t = ginibre(0, Order::Finite(1));
        assert_relative_eq!(t.chi(c(7.3, -2.0)).unwrap().re, 1.0, max_relative = 1e-14);

        let t = ginibre(0, Order::Finite(3));
        assert_relative_eq!(t.chi(c(1.0, 0.0)).unwrap().re, 2.5, max_relative = 1e-13);

        let t = ginibre(1, Order::Finite(2));
        assert_relative_eq!(t.chi(c(2.0, 0.0)).unwrap().re, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn jomega_at_zero_is_inverse_first_mellin_moment() {
        let t = ginibre(0, Order::Finite(5));
        assert_relative_eq!(t.jomega(c(0.0, 0.0)).re, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn jomega_limit_matches_bessel() {
        // J omega(i y) = J0(2 sqrt(y)) for the charge-0 Ginibre weight
        let t = ginibre(0, Order::Limit);
        let v = t.jomega(c(0.0, 1.0));
        assert_relative_eq!(v.re, 0.223_890_779_141_235_6, max_relative = 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn jomega_exponential_bound() {
        // |J omega(z)| <= C e^{|z|} with C = assump1 bound
        let t = ginibre(0, Order::Finite(30));
        let c_tilde = t.spec.assump1_bound();
        assert_relative_eq!(c_tilde, 1.0, max_relative = 1e-12);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let r = 10.0 * next();
            let phi = TWO_PI * next();
            let z = Complex64::from_polar(r, phi);
            assert!(t.jomega(z).norm() <= c_tilde * r.exp() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn komega_closed_form_value() {
        // K omega(-i) = 2 K0(2)
        let t = ginibre(0, Order::Limit);
        let v = t.komega(c(0.0, -1.0)).unwrap();
        assert_relative_eq!(v.re, 0.227_787_745_4, max_relative = 1e-8);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn komega_quadrature_matches_closed_form() {
        let closed = ginibre(0, Order::Limit);
        let quad = ginibre_quad(0, Order::Limit);
        for &z in &[c(1.0, 0.0), c(0.0, -1.0), c(0.7, 0.4), c(-2.0, 1.0), c(-0.3, -0.8)] {
            let a = closed.komega(z).unwrap();
            let b = quad.komega(z).unwrap();
            assert!((a - b).norm() <= 1e-7 * a.norm().max(1.0), "z={z}: {a} vs {b}");
        }
    }

    #[test]
    fn komega_on_cut_rejected() {
        let t = ginibre(0, Order::Limit);
        assert!(matches!(t.komega(c(0.0, 0.5)), Err(PolyaError::OnCut(_))));
        assert!(matches!(t.komega(c(0.0, 0.0)), Err(PolyaError::OnCut(_))));
        assert!(t.komega(c(0.0, -0.5)).is_ok());
    }

    #[test]
    fn komega_small_argument_bound_on_ray() {
        // |K omega(-i t)| <= c / t on t in [1e-3, 1]: fit c on a coarse grid,
        // then verify the inequality on a finer one.
        let t = ginibre(0, Order::Limit);
        let fit: f64 = (0..=20)
            .map(|k| 1e-3 * (1000.0f64).powf(k as f64 / 20.0))
            .map(|s| t.komega(c(0.0, -s)).unwrap().norm() * s)
            .fold(0.0, f64::max);
        assert!(fit.is_finite() && fit > 0.0);
        for k in 1..41 {
            let s = 1e-3 * (1000.0f64).powf((k as f64 - 0.5) / 40.0);
            let v = t.komega(c(0.0, -s)).unwrap().norm();
            assert!(v <= 1.10 * fit / s, "bound fails at t={s}: {v} vs {}", fit / s);
        }
    }

    #[test]
    fn komega_tilt_invariance() {
        for &z in &[c(1.0, 0.0), c(-1.5, 0.5), c(0.4, 2.0)] {
            let a = PolyaTransforms::new(
                MellinSpec::ginibre_quadrature(0, Order::Limit).with_tilt(0.3),
            )
            .komega(z)
            .unwrap();
            let b = PolyaTransforms::new(
                MellinSpec::ginibre_quadrature(0, Order::Limit).with_tilt(0.6),
            )
            .komega(z)
            .unwrap();
            assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "z={z}");
        }
    }

    #[test]
    fn jtilde_closed_form_and_quadrature() {
        let closed = ginibre(0, Order::Limit);
        let quad = ginibre_quad(0, Order::Limit);
        assert_relative_eq!(closed.jtilde(1.0).unwrap(), 0.223_890_779_1, max_relative = 1e-9);
        for &y in &[0.25, 1.0, 2.5, 7.0] {
            assert_relative_eq!(
                closed.jtilde(y).unwrap(),
                quad.jtilde(y).unwrap(),
                epsilon = 1e-9,
                max_relative = 1e-8
            );
        }
        // zero of J0 pulled back through y = (j_{0,1}/2)^2
        let y0 = (2.404_825_557_695_773_f64 / 2.0).powi(2);
        assert!(quad.jtilde(y0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn jtilde_matches_cut_discontinuity_limit() {
        let t = ginibre_quad(0, Order::Limit);
        let y = 0.5;
        let eps = 1e-6;
        let jump = (t.komega(c(eps, y)).unwrap() - t.komega(c(-eps, y)).unwrap())
            * imag_unit()
            / TWO_PI;
        assert_relative_eq!(jump.re, t.jtilde(y).unwrap(), epsilon = 1e-4);
    }

    #[test]
    fn jtilde_tilt_invariance() {
        for &y in &[0.3, 1.0, 4.0] {
            let a = PolyaTransforms::new(
                MellinSpec::ginibre_quadrature(0, Order::Limit).with_tilt(0.3),
            )
            .jtilde(y)
            .unwrap();
            let b = PolyaTransforms::new(
                MellinSpec::ginibre_quadrature(0, Order::Limit).with_tilt(0.6),
            )
            .jtilde(y)
            .unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-9, max_relative = 1e-8);
        }
    }

    #[test]
    fn jomega_equals_jtilde_on_positive_axis() {
        // both are J0(2 sqrt(y)) for the charge-0 Ginibre weight
        let t = ginibre_quad(0, Order::Limit);
        for &y in &[0.2, 1.0, 3.0, 9.0] {
            let a = t.jomega(c(0.0, y)).re;
            let b = t.jtilde(y).unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-8, max_relative = 1e-7);
        }
    }

    // Symbolic q_n oracles from the Mellin calculus:
    //   q_1 = d/dl (l e^-l) = (1-l) e^-l
    //   q_2 = (2 - 4l + l^2) e^-l
    //   q_3 = (6 - 18l + 9l^2 - l^3) e^-l / 2
    #[test]
    fn qn_weight_matches_symbolic_forms() {
        let q1 = ginibre(0, Order::Finite(1));
        assert_relative_eq!(q1.qn_weight(0.5).unwrap(), 0.5 * (-0.5f64).exp(), epsilon = 1e-9);

        let q2 = ginibre(0, Order::Finite(2));
        for &l in &[0.1f64, 0.3, 0.7, 0.95] {
            let want = (2.0 - 4.0 * l + l * l) * (-l).exp();
            assert_relative_eq!(q2.qn_weight(l).unwrap(), want, epsilon = 1e-9, max_relative = 1e-8);
        }

        let q3 = ginibre(0, Order::Finite(3));
        for &l in &[0.2f64, 0.5, 0.8] {
            let want = (6.0 - 18.0 * l + 9.0 * l * l - l * l * l) * (-l).exp() / 2.0;
            assert_relative_eq!(q3.qn_weight(l).unwrap(), want, epsilon = 1e-9, max_relative = 1e-8);
        }
    }

    #[test]
    fn qn_symbolic_moments_match_mellin_formula() {
        // integral of lambda^j q_3 over (0, inf): zero at integer j < n,
        // Gamma(n - j) M(1 + j) / (Gamma(n) Gamma(-j)) in general;
        // at j = 3/2 that is 9 sqrt(pi) / 64.
        let q3 = |l: f64| (6.0 - 18.0 * l + 9.0 * l * l - l * l * l) * (-l).exp() / 2.0;
        let m1 = crate::quadrature::integrate_interval(|l| c(l * q3(l), 0.0), 0.0, 60.0, 1e-11)
            .unwrap()
            .re;
        assert!(m1.abs() < 1e-8, "first integer moment should vanish, got {m1}");
        let m32 = crate::quadrature::integrate_interval(
            |l| c(l.powf(1.5) * q3(l), 0.0),
            0.0,
            60.0,
            1e-11,
        )
        .unwrap()
        .re;
        assert_relative_eq!(m32, 9.0 * std::f64::consts::PI.sqrt() / 64.0, max_relative = 1e-8);
    }

    #[test]
    fn qn_weight_domain_checks() {
        let t = ginibre(0, Order::Finite(4));
        assert!(t.qn_weight(0.0).is_err());
        assert!(t.qn_weight(1.0).is_err());
        assert!(t.qn_weight(0.999).is_ok());
        let tinf = ginibre(0, Order::Limit);
        assert!(matches!(tinf.qn_weight(0.5), Err(PolyaError::FiniteOrderRequired)));
    }

    #[test]
    fn p_poly_is_one_minus_lambda_for_n_two() {
        let t = ginibre(0, Order::Finite(2));
        for &l in &[0.0, 0.4, 1.7] {
            assert_relative_eq!(t.p_poly(l).unwrap().re, 1.0 - l, max_relative = 1e-13);
        }
    }

    #[test]
    fn jomega_taylor_recentering() {
        // entirety surrogate: recompute the truncated series about a shifted
        // center from its derivative coefficients and compare.
        let n = 40usize;
        let t = ginibre(0, Order::Finite(n as u32));
        let center = c(0.8, 0.5);
        let z = c(1.9, -0.4);
        // a_j = i^j / (j! M(j+1)); derivatives at center via the finite sum
        let mut a = Vec::with_capacity(n);
        let mut fact = 1.0;
        let mut gam = 1.0; // Gamma(j+1) for nu = 0
        for j in 0..n {
            if j > 0 {
                fact *= j as f64;
                gam *= j as f64;
            }
            a.push(imag_unit().powi(j as i32) / (fact * gam));
        }
        let mut recentered = c(0.0, 0.0);
        let dz = z - center;
        let mut dz_pow = c(1.0, 0.0);
        let mut kfact = 1.0;
        for k in 0..n {
            if k > 0 {
                kfact *= k as f64;
                dz_pow *= dz;
            }
            // k-th derivative at center: sum_{j>=k} a_j j!/(j-k)! center^{j-k}
            let mut deriv = c(0.0, 0.0);
            let mut cpow = c(1.0, 0.0);
            for j in k..n {
                let mut fall = 1.0;
                for m in 0..k {
                    fall *= (j - m) as f64;
                }
                deriv += a[j] * fall * cpow;
                cpow *= center;
            }
            recentered += deriv * dz_pow / kfact;
        }
        let direct = t.jomega(z);
        assert!((direct - recentered).norm() <= 1e-9 * direct.norm().max(1.0));
    }
}
