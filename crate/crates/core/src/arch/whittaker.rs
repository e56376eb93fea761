//! Whittaker functions on A⁺ through the double Bessel integral
//! 𝒲(ν,a) = 2a1a2²∫∫ K_{(ν2−ν1)/2}(2πv1) K_{(ν1+ν2)/2}(2πv2)
//!          · exp(−π(a2²/(v1v2) + v1v2/a1² + a1²(v1/v2 + v2/v1))) dv1dv2/(v1v2).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::roots::sp4;
use super::special::{bessel_k, is_gamma_pole, ln_gamma};
use super::{APoint, ArchError, SpectralParam};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhittakerOptions {
    /// Relative change between successive step halvings at which the trapezoid rule stops.
    pub tol: f64,
    /// Initial step in log coordinates.
    pub h0: f64,
    pub max_halvings: u32,
    /// Integrand cut-off, in units of e-folds below the peak.
    pub margin: f64,
}

impl Default for WhittakerOptions {
    fn default() -> Self {
        WhittakerOptions { tol: 1e-9, h0: 0.2, max_halvings: 6, margin: 60.0 }
    }
}

/// ∫∫ K_{μ1}(κw1) K_{μ2}(κw2) exp(−π(α/(w1w2) + βw1w2 + γ(w1/w2 + w2/w1))) dw1dw2/(w1w2).
pub struct KernelIntegral {
    pub mu1: Complex64,
    pub mu2: Complex64,
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl KernelIntegral {
    /// Square [lo, hi]² in log coordinates outside which the integrand is below e^{−margin}.
    pub fn window(&self, margin: f64) -> (f64, f64) {
        let m = margin + 10.0 * (self.mu1.re.abs() + self.mu2.re.abs());
        let floor = m / PI + 2.0 * (self.alpha * self.beta).sqrt();
        let s_lo = (self.alpha / floor).ln();
        let s_hi = (floor / self.beta).ln();
        let d = (1.0 + m / (2.0 * PI * self.gamma)).acosh();
        let hi = (0.5 * (s_hi + d)).min((2.0 * m / self.kappa).ln());
        (0.5 * (s_lo - d), hi)
    }

    /// Trapezoid sum and the sum of absolute values of its terms.
    fn sum(&self, t: &[f64], k1: &[Complex64], k2: &[Complex64], h: f64) -> (Complex64, f64) {
        let et: Vec<f64> = t.iter().map(|v| v.exp()).collect();
        let mut total = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for i in 0..t.len() {
            let mut row = Complex64::new(0.0, 0.0);
            let mut row_mag = 0.0;
            for j in 0..t.len() {
                let p = et[i] * et[j];
                let r = et[i] / et[j];
                let e = -PI * (self.alpha / p + self.beta * p + self.gamma * (r + 1.0 / r));
                if e > -745.0 {
                    let w = e.exp();
                    row += k2[j] * w;
                    row_mag += k2[j].norm() * w;
                }
            }
            total += k1[i] * row;
            mag += k1[i].norm() * row_mag;
        }
        (total * h * h, mag * h * h)
    }

    /// Trapezoid rule in log coordinates with nested step halving. For large |Im μ| the
    /// oscillating kernel cancels far below the size of its terms, so the stopping test
    /// also accepts changes at the rounding level of Σ|terms|.
    pub fn evaluate(&self, opts: &WhittakerOptions) -> Result<Complex64, ArchError> {
        let (lo, hi) = self.window(opts.margin);
        let mut n = (((hi - lo) / opts.h0).ceil() as usize).max(8);
        let mut h = (hi - lo) / n as f64;
        let mut t: Vec<f64> = (0..=n).map(|k| lo + k as f64 * h).collect();
        let kv = |mu: Complex64, t: &[f64]| -> Result<Vec<Complex64>, ArchError> {
            t.iter().map(|&s| bessel_k(mu, self.kappa * s.exp())).collect()
        };
        let mut k1 = kv(self.mu1, &t)?;
        let mut k2 = kv(self.mu2, &t)?;
        let mut prev = self.sum(&t, &k1, &k2, h).0;
        for _ in 0..opts.max_halvings {
            let mids: Vec<f64> = (0..n).map(|k| lo + (k as f64 + 0.5) * h).collect();
            let m1 = kv(self.mu1, &mids)?;
            let m2 = kv(self.mu2, &mids)?;
            let interleave = |old: &[Complex64], new: &[Complex64]| {
                let mut v = Vec::with_capacity(old.len() + new.len());
                for k in 0..new.len() {
                    v.push(old[k]);
                    v.push(new[k]);
                }
                v.push(old[new.len()]);
                v
            };
            k1 = interleave(&k1, &m1);
            k2 = interleave(&k2, &m2);
            n *= 2;
            h *= 0.5;
            t = (0..=n).map(|k| lo + k as f64 * h).collect();
            let (cur, mag) = self.sum(&t, &k1, &k2, h);
            if (cur - prev).norm() <= opts.tol * cur.norm() + 64.0 * f64::EPSILON * mag + 1e-300 {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(ArchError::QuadratureFailure(format!(
            "Whittaker kernel (mu1={}, mu2={}) did not stabilize",
            self.mu1, self.mu2
        )))
    }
}

fn orders(nu: &SpectralParam) -> (Complex64, Complex64) {
    (0.5 * (nu.nu2 - nu.nu1), 0.5 * (nu.nu1 + nu.nu2))
}

/// Normalized 𝒲(ν, a, ψ) for the character ψ(u(x,a,b,c)) = e(x + c).
pub fn whittaker_normalized(nu: &SpectralParam, a: &APoint, opts: &WhittakerOptions) -> Result<Complex64, ArchError> {
    let (mu1, mu2) = orders(nu);
    let k = KernelIntegral {
        mu1,
        mu2,
        kappa: 2.0 * PI,
        alpha: a.a2 * a.a2,
        beta: 1.0 / (a.a1 * a.a1),
        gamma: a.a1 * a.a1,
    };
    Ok(k.evaluate(opts)? * (2.0 * a.a1 * a.a2 * a.a2))
}

/// 4π²/∏_{α>0} Γ(½ + ⟨ν, α0⟩).
pub fn jacquet_factor(nu: &SpectralParam) -> Result<Complex64, ArchError> {
    let mut log = Complex64::new(0.0, 0.0);
    for z in sp4().positive_pairings(nu) {
        let w = z + 0.5;
        if is_gamma_pole(w, 1e-10) {
            return Err(ArchError::GammaPole(w));
        }
        log -= ln_gamma(w);
    }
    Ok(log.exp() * (4.0 * PI * PI))
}

/// W(ν, a, ψ) = 4π²𝒲(ν, a, ψ)/∏_{α>0} Γ(½ + ⟨ν, α0⟩).
pub fn whittaker_unnormalized(nu: &SpectralParam, a: &APoint, opts: &WhittakerOptions) -> Result<Complex64, ArchError> {
    let f = jacquet_factor(nu)?;
    Ok(f * whittaker_normalized(nu, a, opts)?)
}

/// W(ν, a, ψ_η) for ψ_η(u(x,a,b,c)) = e(η1·x + η2·c), η1, η2 > 0, evaluated directly from
/// the Bessel integral with frequencies (η1, η2) rather than through the torus action.
pub fn whittaker_eta(
    nu: &SpectralParam,
    a: &APoint,
    eta1: f64,
    eta2: f64,
    opts: &WhittakerOptions,
) -> Result<Complex64, ArchError> {
    if !(eta1 > 0.0 && eta2 > 0.0) {
        return Err(ArchError::DomainError("character frequencies must be positive"));
    }
    let (mu1, mu2) = orders(nu);
    let k = KernelIntegral {
        mu1,
        mu2,
        kappa: 2.0 * PI * eta2.sqrt(),
        alpha: eta1 * eta1 * a.a2 * a.a2,
        beta: 1.0 / (a.a1 * a.a1),
        gamma: eta2 * a.a1 * a.a1,
    };
    let scale = (nu.nu2 * eta1.ln() + mu2 * eta2.ln()).exp();
    Ok(jacquet_factor(nu)? * scale * k.evaluate(opts)? * (2.0 * a.a1 * a.a2 * a.a2))
}
