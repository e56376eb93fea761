//! Complex Gamma (Lanczos) and Bessel K of complex order (integral representation).

use num_complex::Complex64;
use std::f64::consts::PI;

use super::ArchError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Γ(z) up to a multiple of 2πi (so exp of it is Γ(z)).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn is_gamma_pole(z: Complex64, tol: f64) -> bool {
    z.re < tol && (z.re - z.re.round()).abs() < tol && z.im.abs() < tol
}

pub fn gamma(z: Complex64) -> Result<Complex64, ArchError> {
    if is_gamma_pole(z, 1e-12) {
        return Err(ArchError::GammaPole(z));
    }
    Ok(ln_gamma(z).exp())
}

/// K_ν(x) = ½∫_ℝ exp(−x cosh t + νt) dt.
///
/// For |Im ν| large the contour is moved to Im t = θ close to ±π/2, which removes most of the
/// e^{π|Im ν|/2} cancellation of the real-line integral. Trapezoid rule, step halved until stable.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64, ArchError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(ArchError::DomainError("Bessel K needs x > 0"));
    }
    let y = nu.im;
    // Through the saddle i·asin(y/x) when |y| < x, otherwise close to ±π/2.
    let delta = (3.0 / y.abs()).min(PI / 2.0);
    let theta = if y.abs() > 1e-300 { y.signum() * (PI / 2.0 - delta).min((y.abs() / x).min(1.0).asin()) } else { 0.0 };
    let xr = x * theta.cos();
    let r = nu.re;
    let ell = |s: f64| -xr * s.cosh() + r * s - y * theta;
    let s0 = (r / xr).asinh();
    let lmax = ell(s0);
    if lmax < -745.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let cut = lmax - 46.0;
    let edge = |dir: f64| {
        let mut step = 1.0;
        while ell(s0 + dir * step) > cut {
            step *= 2.0;
        }
        let (mut lo, mut hi) = (0.0, step);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if ell(s0 + dir * mid) > cut {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        s0 + dir * hi
    };
    let (a, b) = (edge(-1.0), edge(1.0));
    let rot = Complex64::new(0.0, theta);
    let f = |s: f64| {
        let t = Complex64::new(s, 0.0) + rot;
        (-x * t.cosh() + nu * t).exp()
    };
    let mut n: usize = 64;
    let mut h = (b - a) / n as f64;
    let mut sum: Complex64 = (0..=n).map(|k| f(a + k as f64 * h)).sum();
    let mut prev = sum * h;
    for _ in 0..16 {
        let mid: Complex64 = (0..n).map(|k| f(a + (k as f64 + 0.5) * h)).sum();
        sum += mid;
        n *= 2;
        h *= 0.5;
        let cur = sum * h;
        if (cur - prev).norm() <= 1e-13 * cur.norm() + 1e-16 * lmax.exp() * (b - a) {
            return Ok(0.5 * cur);
        }
        prev = cur;
    }
    Err(ArchError::QuadratureFailure(format!("bessel_k(nu={nu}, x={x})")))
}
