use num_complex::Complex64;

use super::KernelError;
use crate::quadrature::GaussLegendre;

/// Macroscopic GUE data at spectral position `x`: Green function, semicircle
/// density, the two saddle points of the kernel integrand, and the contour
/// radius `r = |z_-| = |G(x)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GueMacro {
    pub x: f64,
    pub green: Complex64,
    pub density: f64,
    pub saddle_plus: Complex64,
    pub saddle_minus: Complex64,
    pub radius: f64,
}

/// Green function, semicircle density and saddle points at `x`.
///
/// For `|x| > 2` the Green function takes the `sign(x)` branch so that
/// `G(x) ~ 1/x` at infinity; inside the support `G(x) = x/2 - i sqrt(1 - x^2/4)`
/// so that `pi rho(x) = |Im G(x)|`.
pub fn gue_macro(x: f64) -> GueMacro {
    let (green, density, saddle_plus, saddle_minus) = if x.abs() <= 2.0 {
        let s = (4.0 - x * x).sqrt();
        let green = Complex64::new(0.5 * x, -0.5 * s);
        let density = s / (2.0 * std::f64::consts::PI);
        // z_pm = -i (x pm i sqrt(4 - x^2)) / 2
        let plus = Complex64::new(0.5 * s, -0.5 * x);
        let minus = Complex64::new(-0.5 * s, -0.5 * x);
        (green, density, plus, minus)
    } else {
        let s = (x * x - 4.0).sqrt();
        let green = Complex64::new(0.5 * (x - x.signum() * s), 0.0);
        // z_pm = -i (x pm sign(x) sqrt(x^2 - 4)) / 2
        let plus = Complex64::new(0.0, -0.5 * (x + x.signum() * s));
        let minus = Complex64::new(0.0, -0.5 * (x - x.signum() * s));
        (green, 0.0, plus, minus)
    };
    GueMacro { x, green, density, saddle_plus, saddle_minus, radius: saddle_minus.norm() }
}

/// Finite-`n` GUE kernel `K_n(a_1, a_2)` in the polynomial-in-first-entry
/// normalization, by the double contour integral: trapezoid on the unit
/// circle times truncated Gauss-Legendre panels on the real line.
pub fn gue_kernel_finite(n: u32, a1: f64, a2: f64) -> Result<f64, KernelError> {
    if n == 0 {
        return Err(KernelError::Domain("kernel order n must be >= 1".into()));
    }
    if n > 512 {
        return Err(KernelError::Domain(format!(
            "n = {n} exceeds the double-precision magnitude budget (e^(n/2) factors)"
        )));
    }
    let nf = n as f64;
    let m = 512usize.max(8 * n as usize);

    // Real-line truncation: the Gaussian e^{-n z^2 / 2} is < 1e-17 beyond.
    let t_max = 4.0f64.max((80.0 / nf).sqrt());
    let nodes_per_unit = 48.0f64.max(12.0 * nf.sqrt()).max(4.0 * a2.abs());
    let panels = (2.0 * t_max * nodes_per_unit / 16.0).ceil() as usize;
    let gl = GaussLegendre::new(16);
    let h = 2.0 * t_max / panels as f64;

    let mut z_nodes = Vec::with_capacity(panels * 16);
    let mut z_fac = Vec::with_capacity(panels * 16);
    let mut z_pow = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        let lo = -t_max + p as f64 * h;
        for (xi, wi) in gl.nodes.iter().zip(&gl.weights) {
            let t = lo + 0.5 * h * (xi + 1.0);
            let z = Complex64::new(t, 0.0);
            let weight = 0.5 * h * wi;
            let expo = -0.5 * nf * z * z - Complex64::new(0.0, a2) * z;
            z_nodes.push(z);
            z_fac.push(weight * expo.exp());
            z_pow.push(z.powi(n as i32));
        }
    }

    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let theta = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / m as f64;
        let zp = Complex64::new(theta.cos(), theta.sin());
        let zp_pow = zp.powi(n as i32);
        let outer = zp * (0.5 * nf * zp * zp + Complex64::new(0.0, a1) * zp).exp();
        let mut inner = Complex64::new(0.0, 0.0);
        for j in 0..z_nodes.len() {
            inner += z_fac[j] * ratio_factor(z_nodes[j], zp, z_pow[j], zp_pow, n);
        }
        total += outer * inner;
    }
    let value = total / (m as f64 * 2.0 * std::f64::consts::PI);
    Ok(value.re)
}

/// `[1 - (z/z')^n] / (z' - z)` with the removable singularity at `z = z'`
/// evaluated through the geometric-sum form.
pub(crate) fn ratio_factor(
    z: Complex64,
    zp: Complex64,
    z_pow: Complex64,
    zp_pow: Complex64,
    n: u32,
) -> Complex64 {
    let diff = zp - z;
    if diff.norm() > 0.1 {
        (1.0 - z_pow / zp_pow) / diff
    } else {
        let q = z / zp;
        let mut s = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            s += p;
            p *= q;
        }
        s / zp
    }
}
