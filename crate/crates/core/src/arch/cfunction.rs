//! Harish-Chandra c-function, Plancherel density and the numeric c-integral.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::quad::{de_trapezoid, tanh_sinh_half_pi};
use super::roots::{rho, sp4};
use super::special::{is_gamma_pole, ln_gamma};
use super::{ArchError, SpectralParam};
use crate::parallel::{map_range, Parallelism};

/// Lebesgue volume factor: du_Leb = π³·du, where du is the Haar measure with c(ρ) = 1.
pub const U_MEASURE: f64 = PI * PI * PI;

/// ∏_{α>0} Γ(⟨λ, α0⟩)/Γ(½ + ⟨λ, α0⟩).
fn gamma_ratio_product(nu: &SpectralParam) -> Result<Complex64, ArchError> {
    let mut log = Complex64::new(0.0, 0.0);
    for z in sp4().positive_pairings(nu) {
        if is_gamma_pole(z, 1e-12) {
            return Err(ArchError::GammaPole(z));
        }
        let w = z + 0.5;
        if is_gamma_pole(w, 1e-12) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        log += ln_gamma(z) - ln_gamma(w);
    }
    Ok(log.exp())
}

/// The constant c0 in c(λ) = (c0/4π²)∏_{α>0} Γ(⟨λ,α0⟩)/Γ(½+⟨λ,α0⟩), fixed by c(ρ) = 1.
pub fn c0() -> f64 {
    static C0: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *C0.get_or_init(|| 4.0 * PI * PI / rho_product())
}

/// Divides by the product at ρ directly, so that c(ρ) = 1 holds exactly in floating point.
pub fn c_function(nu: &SpectralParam) -> Result<Complex64, ArchError> {
    Ok(gamma_ratio_product(nu)? / rho_product())
}

fn rho_product() -> f64 {
    static P: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *P.get_or_init(|| gamma_ratio_product(&rho()).expect("no pole at rho").re)
}

/// dν/(c(iν)c(−iν)) = (16π⁴/c0²)·∏_{α>0} ⟨ν,α0⟩·tanh(π⟨ν,α0⟩).
pub fn plancherel_density(nu1: f64, nu2: f64) -> f64 {
    let nu = SpectralParam::real(nu1, nu2);
    let c = c0();
    let prod: f64 = sp4()
        .positive_pairings(&nu)
        .into_iter()
        .map(|z| z.re * (PI * z.re).tanh())
        .product();
    16.0 * PI.powi(4) / (c * c) * prod
}

/// 1/(c(iν)c(−iν)) from the Gamma formula.
pub fn plancherel_via_c(nu1: f64, nu2: f64) -> Result<f64, ArchError> {
    let nu = SpectralParam::imag(nu1, nu2);
    let v = c_function(&nu)? * c_function(&nu.neg())?;
    Ok(1.0 / v.re)
}

/// Settings of the double-exponential 4-dim trapezoid rule over U(ℝ).
#[derive(Clone, Copy, Debug)]
pub struct UQuadrature {
    /// Double-exponential points and half-width for x, a, b.
    pub n: usize,
    pub l: f64,
    /// Tanh-sinh points for the angle θ with c = c* + w·tan θ.
    pub n_theta: usize,
}

impl Default for UQuadrature {
    fn default() -> Self {
        UQuadrature { n: 48, l: 3.0, n_theta: 48 }
    }
}

/// A quadrature node of U(ℝ) with the invariants (E, P) of A(Ju) there, taken from the
/// parametrization rather than recomputed from c.
#[derive(Clone, Copy, Debug)]
pub struct UNode {
    pub x: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub e: f64,
    pub p: f64,
}

/// ∫_{U(ℝ)} F(u) du_Leb, double-exponential in x, a, b and tanh-sinh in θ, where
/// c = c*(x, a, b) + w(x, a, b)·tan θ. Here P(c) = (α − cβ)² + (γ − cδ)² from A(Ju) becomes
/// P_min/cos²θ, so e^{λ(A(Ju))} is a power of cos θ in the last variable.
pub fn integrate_u<F>(q: UQuadrature, par: Parallelism, f: F) -> Complex64
where
    F: Fn(&UNode) -> Complex64 + Sync + Send,
{
    let nodes = de_trapezoid(q.n, q.l);
    let angles = tanh_sinh_half_pi(q.n_theta, 3.0);
    let n = nodes.len();
    let parts = map_range(par, n * n, |ij| {
        let (x, wx) = nodes[ij / n];
        let (a, wa) = nodes[ij % n];
        let mut acc = Complex64::new(0.0, 0.0);
        for &(b, wb) in &nodes {
            let (c0, w) = c_centre(x, a, b);
            let e = 1.0 + x * x + a * a + b * b;
            let p_min = e * w;
            for &(th, wt) in &angles {
                let cos = th.cos();
                let sec2 = 1.0 / (cos * cos);
                let node = UNode { x, a, b, c: c0 + th.tan() * w, e, p: p_min * sec2 };
                acc += f(&node) * (wb * wt * w * sec2);
            }
        }
        acc * (wx * wa)
    });
    parts.into_iter().sum()
}

/// Minimizer c* of P(c) and the scale w with P(c* + s·w) = P_min(1 + s²).
///
/// With P(c) = |v − cu|², v = (a² + 1, xa − b), u = (ax + b, x² + 1), the cross product
/// v × u equals 1 + x² + a² + b² identically, which gives w and P_min = E·w without cancellation.
pub fn c_centre(x: f64, a: f64, b: f64) -> (f64, f64) {
    let (al, be, ga, de) = (a * a + 1.0, a * x + b, x * a - b, x * x + 1.0);
    let big_a = be * be + de * de;
    let e = 1.0 + x * x + a * a + b * b;
    ((al * be + ga * de) / big_a, e / big_a)
}

/// ∫_{U(ℝ)} e^{(ν+ρ)(A(Ju))} du in the c(ρ) = 1 normalization, ν real in the convergence cone.
pub fn c_integral_numeric(nu1: f64, nu2: f64, q: UQuadrature, par: Parallelism) -> f64 {
    let r = rho();
    let (l1, l2) = (nu1 + r.nu1.re, nu2 + r.nu2.re);
    // e^{λ1 h1 + λ2 h2} = E^{(λ1−λ2)/2}·P^{−λ1/2}.
    let (pe, pp) = (0.5 * (l1 - l2), -0.5 * l1);
    integrate_u(q, par, |u| Complex64::new((pe * u.e.ln() + pp * u.p.ln()).exp(), 0.0))
    .re
        / U_MEASURE
}
