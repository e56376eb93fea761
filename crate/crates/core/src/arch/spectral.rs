//! Spectral parameters of the Klingen and Siegel continuous spectrum, and spectral test functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SpectralParam;

/// Parameter of diag(y^{1/2}, u, y^{−1/2}, u^{−1}) ↦ |y|^s, read on diag(a1, a2, ·, ·) with y = a1².
pub fn nu_k(s: Complex64) -> SpectralParam {
    SpectralParam::new(2.0 * s, Complex64::new(0.0, 0.0))
}

/// Parameter of diag(y^{1/2}u, y^{−1/2}u, ·, ·) ↦ |y|^s, read with y = a1/a2.
pub fn nu_s(s: Complex64) -> SpectralParam {
    SpectralParam::new(s, -s)
}

/// Weyl-invariant spectral test functions h(ν).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SpectralTestFn {
    /// h(ν) = exp((ν1² + ν2²)/T²).
    Gaussian { temperature: f64 },
    Zero,
}

impl Default for SpectralTestFn {
    fn default() -> Self {
        SpectralTestFn::Gaussian { temperature: 2.0 }
    }
}

impl SpectralTestFn {
    pub fn eval(&self, nu: &SpectralParam) -> Complex64 {
        match *self {
            SpectralTestFn::Gaussian { temperature } => {
                ((nu.nu1 * nu.nu1 + nu.nu2 * nu.nu2) / (temperature * temperature)).exp()
            }
            SpectralTestFn::Zero => Complex64::new(0.0, 0.0),
        }
    }

    /// h(−iν) for real ν.
    pub fn on_tempered(&self, nu1: f64, nu2: f64) -> Complex64 {
        self.eval(&SpectralParam::imag(-nu1, -nu2))
    }

    /// Radius beyond which |h(−iν)| < threshold on real ν; None when h vanishes.
    pub fn support_radius(&self, threshold: f64) -> Option<f64> {
        match *self {
            SpectralTestFn::Gaussian { temperature } => Some(temperature * (-threshold.ln()).sqrt()),
            SpectralTestFn::Zero => None,
        }
    }

    pub fn decay_class(&self) -> &'static str {
        match self {
            SpectralTestFn::Gaussian { .. } => "weyl-invariant, gaussian decay",
            SpectralTestFn::Zero => "zero",
        }
    }
}
