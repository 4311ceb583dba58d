use num_complex::Complex64;

use super::MathError;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficient set).
const LANCZOS_G: f64 = 4.742_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_7; // ln(2*pi)/2
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Principal-branch complex log-Gamma.
///
/// The result satisfies `exp(cgamma_ln(z)) = Gamma(z)`; the imaginary part may
/// differ from the analytically continued log-Gamma by a multiple of `2*pi*i`
/// in the reflected half-plane, which is invisible after exponentiation (the
/// only way the crate consumes it).
pub fn cgamma_ln(z: Complex64) -> Result<Complex64, MathError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(MathError::GammaPole(z.re));
    }
    Ok(lngamma_unchecked(z))
}

/// `Gamma(z)` via `exp(cgamma_ln(z))`.
pub fn cgamma(z: Complex64) -> Result<Complex64, MathError> {
    cgamma_ln(z).map(Complex64::exp)
}

fn lngamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z).
        return Complex64::new(LN_PI, 0.0) - log_sin_pi(z) - lngamma_unchecked(1.0 - z);
    }
    let zm = z - 1.0;
    let mut series = Complex64::new(LANCZOS_C0, 0.0);
    for (k, c) in LANCZOS_COEFFS.iter().enumerate() {
        series += c / (zm + (k + 1) as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    (zm + 0.5) * t.ln() - t + LN_2PI_HALF + series.ln()
}

// log(sin(pi z)) with the growing exponential factored out so that large
// |Im z| cannot overflow. Branch offsets of 2*pi*i are irrelevant here.
fn log_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let log_2i = Complex64::new(std::f64::consts::LN_2, std::f64::consts::FRAC_PI_2);
    if z.im >= 0.0 {
        // sin(pi z) = -(e^{-i pi z}/2i) (1 - e^{2 i pi z}), |e^{2 i pi z}| <= 1
        let small = (2.0 * std::f64::consts::PI * i * z).exp();
        -i * std::f64::consts::PI * z + (1.0 - small).ln() - log_2i + Complex64::new(0.0, std::f64::consts::PI)
    } else {
        let small = (-2.0 * std::f64::consts::PI * i * z).exp();
        i * std::f64::consts::PI * z + (1.0 - small).ln() - log_2i
    }
}
