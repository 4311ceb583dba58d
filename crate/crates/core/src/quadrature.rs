//! Deterministic integration primitives used by every kernel evaluation:
//! adaptive Gauss-Legendre panels on real intervals, the periodic trapezoid
//! rule on the unit circle, and two-ray tilted contours for the Mellin-Barnes
//! integrals.
//!
//! All routines are pure and single-threaded; callers that parallelise do so
//! over independent evaluations, never inside a rule.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("adaptive refinement exceeded {max_depth} levels on [{a}, {b}] (singular integrand?)")]
    NoConvergence { a: f64, b: f64, max_depth: u32 },
    #[error("integrand magnitude {magnitude:.3e} at the ray end exceeds tolerance {tol:.3e}; raise s_max")]
    TruncationTail { magnitude: f64, tol: f64 },
    #[error("invalid integration bounds [{a}, {b}]")]
    InvalidBounds { a: f64, b: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

const MAX_DEPTH: u32 = 20;

/// A concrete rule: its nodes, weights and the tolerance it was built for.
///
/// Kernels that need a shared fixed grid (the double contour integrals) build
/// one of these and drive the summation themselves.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: QuadKind,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    GaussLegendrePanels,
    CircleTrapezoid,
    RealLineTruncated,
    TiltedRays,
}

impl QuadratureRule {
    /// Composite Gauss-Legendre panels covering `[a, b]`.
    pub fn gauss_legendre_panels(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let gl = GaussLegendre::new(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                nodes.push(Complex64::new(lo + 0.5 * h * (x + 1.0), 0.0));
                weights.push(Complex64::new(0.5 * h * w, 0.0));
            }
        }
        QuadratureRule { kind: QuadKind::GaussLegendrePanels, nodes, weights, tolerance: 0.0 }
    }

    /// Equispaced trapezoid nodes on the unit circle, staggered by half a
    /// spacing so that no node sits on the real axis. Weights are the uniform
    /// `z_k / m`, making `sum w_k f(z_k)` the approximation of
    /// `oint f(z) dz / (2 pi i)`.
    pub fn circle_trapezoid(m: usize) -> Self {
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for k in 0..m {
            let theta = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / m as f64;
            let z = Complex64::new(theta.cos(), theta.sin());
            nodes.push(z);
            weights.push(z / m as f64);
        }
        QuadratureRule { kind: QuadKind::CircleTrapezoid, nodes, weights, tolerance: 0.0 }
    }

    pub fn evaluate<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }
}

/// Gauss-Legendre nodes/weights on `[-1, 1]`, computed by Newton iteration on
/// the Legendre recurrence.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 2);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            // Chebyshev-based initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Apply to `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> Complex64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive integral of a complex-valued function over a real interval.
///
/// Panels are bisected until two successive refinements agree to the panel's
/// share of `tol`; more than [`MAX_DEPTH`] levels signals a singular integrand
/// and errors out.
pub fn integrate_interval<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64, QuadError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidBounds { a, b });
    }
    static GL15: std::sync::OnceLock<GaussLegendre> = std::sync::OnceLock::new();
    let gl = GL15.get_or_init(|| GaussLegendre::new(15));
    let whole = gl.integrate(&f, a, b);
    adaptive_panel(&f, a, b, whole, tol.max(1e-15), 0, gl)
}

fn adaptive_panel<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    coarse: Complex64,
    tol: f64,
    depth: u32,
    gl: &GaussLegendre,
) -> Result<Complex64, QuadError> {
    let mid = 0.5 * (a + b);
    let left = gl.integrate(f, a, mid);
    let right = gl.integrate(f, mid, b);
    let fine = left + right;
    if (fine - coarse).norm() <= tol.max(1e-14 * fine.norm()) {
        return Ok(fine);
    }
    if depth >= MAX_DEPTH {
        return Err(QuadError::NoConvergence { a, b, max_depth: MAX_DEPTH });
    }
    let half_tol = 0.5 * tol;
    Ok(adaptive_panel(f, a, mid, left, half_tol, depth + 1, gl)?
        + adaptive_panel(f, mid, b, right, half_tol, depth + 1, gl)?)
}

/// Trapezoid rule on the unit circle: approximates `oint f(z) dz / (2 pi i)`,
/// spectrally accurate for `f` analytic in an annulus around `|z| = 1`.
pub fn integrate_circle<F: Fn(Complex64) -> Complex64>(f: F, m: usize) -> Complex64 {
    assert!(m >= 16, "circle trapezoid needs at least 16 nodes");
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let theta = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / m as f64;
        let z = Complex64::new(theta.cos(), theta.sin());
        acc += f(z) * z;
    }
    acc / m as f64
}

/// Integral of `f` along the two tilted rays `s -> exp(i sign(s) theta) s`,
/// `|s| <= s_max`, including the ray direction Jacobians. `f` takes the
/// complex contour point. Errors if the integrand has not decayed below `tol`
/// at the truncation points.
pub fn integrate_tilted_rays<F: Fn(Complex64) -> Complex64>(
    f: F,
    theta: f64,
    s_max: f64,
    tol: f64,
) -> Result<Complex64, QuadError> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(QuadError::InvalidParameter(format!(
            "tilt angle {theta} outside (0, pi/2)"
        )));
    }
    if !(s_max > 0.0) {
        return Err(QuadError::InvalidParameter(format!("s_max = {s_max}")));
    }
    let ray_pos = Complex64::from_polar(1.0, theta);
    let ray_neg = Complex64::from_polar(1.0, -theta);
    for end in [s_max * ray_pos, -s_max * ray_neg] {
        let mag = f(end).norm();
        if mag > tol {
            return Err(QuadError::TruncationTail { magnitude: mag, tol });
        }
    }
    let pos = integrate_interval(|s| f(s * ray_pos), 0.0, s_max, 0.5 * tol)?;
    let neg = integrate_interval(|s| f(s * ray_neg), -s_max, 0.0, 0.5 * tol)?;
    Ok(ray_pos * pos + ray_neg * neg)
}
