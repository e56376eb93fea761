//! Archimedean layer: root data, Iwasawa projection, Gamma and Bessel kernels,
//! Whittaker functions, the c-function and Plancherel density, spherical functions
//! and the spectral transforms that appear on the geometric side.

pub mod cfunction;
pub mod geomcheck;
pub mod iwasawa;
pub mod quad;
pub mod roots;
pub mod special;
pub mod spectral;
pub mod spherical;
pub mod transforms;
pub mod whittaker;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use cfunction::{c0, c_function, c_integral_numeric, plancherel_density, plancherel_via_c};
pub use iwasawa::{a_ju_closed_form, iwasawa_a, Mat4};
pub use roots::RootSystemData;
pub use special::{bessel_k, gamma, ln_gamma};
pub use spectral::{nu_k, nu_s, SpectralTestFn};
pub use spherical::{spherical_phi, SphericalRoute};
pub use transforms::{i_sigma_transform, identity_transform, reduced_point, Fold, ISigmaOptions, ISigmaValue};
pub use whittaker::{whittaker_eta, whittaker_normalized, whittaker_unnormalized, WhittakerOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArchError {
    #[error("matrix is not symplectic (defect {0:e})")]
    NotSymplectic(f64),
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("Gamma pole at {0}")]
    GammaPole(Complex64),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("no convergence under R-doubling (diagnostic {0:e})")]
    NoConvergence(f64),
}

/// H = diag(h1, h2, −h1, −h2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieAElement {
    pub h1: f64,
    pub h2: f64,
}

impl LieAElement {
    pub fn new(h1: f64, h2: f64) -> Self {
        LieAElement { h1, h2 }
    }

    /// Positive chamber 0 < h1 < h2.
    pub fn in_positive_chamber(&self) -> bool {
        0.0 < self.h1 && self.h1 < self.h2
    }

    pub fn exp(&self) -> APoint {
        APoint { a1: self.h1.exp(), a2: self.h2.exp() }
    }
}

/// a = diag(a1, a2, 1/a1, 1/a2) with a1, a2 > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct APoint {
    pub a1: f64,
    pub a2: f64,
}

impl APoint {
    pub fn new(a1: f64, a2: f64) -> Result<Self, ArchError> {
        if !(a1 > 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
            return Err(ArchError::DomainError("A-point entries must be positive"));
        }
        Ok(APoint { a1, a2 })
    }

    pub fn one() -> Self {
        APoint { a1: 1.0, a2: 1.0 }
    }

    pub fn log(&self) -> LieAElement {
        LieAElement { h1: self.a1.ln(), h2: self.a2.ln() }
    }

    pub fn matrix(&self) -> Mat4 {
        iwasawa::diag4([self.a1, self.a2, 1.0 / self.a1, 1.0 / self.a2])
    }
}

/// ν = ν1·e1* + ν2·e2*, pairing with H by ν(H) = ν1h1 + ν2h2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam {
    pub nu1: Complex64,
    pub nu2: Complex64,
}

impl SpectralParam {
    pub fn new(nu1: Complex64, nu2: Complex64) -> Self {
        SpectralParam { nu1, nu2 }
    }

    pub fn real(nu1: f64, nu2: f64) -> Self {
        SpectralParam { nu1: Complex64::new(nu1, 0.0), nu2: Complex64::new(nu2, 0.0) }
    }

    pub fn imag(nu1: f64, nu2: f64) -> Self {
        SpectralParam { nu1: Complex64::new(0.0, nu1), nu2: Complex64::new(0.0, nu2) }
    }

    pub fn eval(&self, h: &LieAElement) -> Complex64 {
        self.nu1 * h.h1 + self.nu2 * h.h2
    }

    pub fn scale(&self, z: Complex64) -> Self {
        SpectralParam { nu1: self.nu1 * z, nu2: self.nu2 * z }
    }

    pub fn add(&self, o: &SpectralParam) -> Self {
        SpectralParam { nu1: self.nu1 + o.nu1, nu2: self.nu2 + o.nu2 }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn conj(&self) -> Self {
        SpectralParam { nu1: self.nu1.conj(), nu2: self.nu2.conj() }
    }

    /// The eight Weyl images: permutations and sign changes of (ν1, ν2).
    pub fn weyl_orbit(&self) -> [SpectralParam; 8] {
        let (a, b) = (self.nu1, self.nu2);
        let p = |x, y| SpectralParam { nu1: x, nu2: y };
        [p(a, b), p(-a, b), p(a, -b), p(-a, -b), p(b, a), p(-b, a), p(b, -a), p(-b, -a)]
    }

    pub fn dist(&self, o: &SpectralParam) -> f64 {
        ((self.nu1 - o.nu1).norm_sqr() + (self.nu2 - o.nu2).norm_sqr()).sqrt()
    }
}
