//! Spherical functions φ_ν(g) = ∫_K e^{(ρ+ν)(A(kg))} dk, by integration over K∞ ≅ U(2) or over U(ℝ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::cfunction::{integrate_u, UQuadrature, U_MEASURE};
use super::iwasawa::{a_ju_from_invariants, a_ju_g, iwasawa_a, k_from_unitary, mul, symplectic_defect, unitary_from_angles, Mat4};
use super::quad::{gl_interval, periodic};
use super::roots::rho;
use super::{ArchError, SpectralParam};
use crate::parallel::{map_range, Parallelism};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SphericalRoute {
    /// Haar integral over U(2) in Hopf coordinates: n points in θ, 2n in each angle.
    K { n: usize },
    /// ∫_U e^{(ρ+ν)(A(Jug))}e^{(ρ−ν)(A(Ju))}du with a double-exponential trapezoid rule of n points on [−l, l].
    U { n: usize, l: f64, n_theta: usize },
}

fn csum(v: Vec<Complex64>) -> Complex64 {
    v.into_iter().sum()
}

pub fn spherical_phi(nu: &SpectralParam, g: &Mat4, route: SphericalRoute, par: Parallelism) -> Result<Complex64, ArchError> {
    let d = symplectic_defect(g);
    if !(d < 1e-10) {
        return Err(ArchError::NotSymplectic(d));
    }
    let r = rho();
    let plus = r.add(nu);
    match route {
        SphericalRoute::K { n } => {
            // dk ∝ sin 2θ dθ dψ1 dψ2 dφ on [0, π/2] × [0, 2π)³, total mass π.
            let th = gl_interval(n, 0.0, PI / 2.0);
            let ang = periodic(2 * n);
            let m = ang.len();
            let parts = map_range(par, th.len() * m, |idx| {
                let (theta, wt) = th[idx / m];
                let (phi, wp) = ang[idx % m];
                let mut s = Complex64::new(0.0, 0.0);
                for &(p1, w1) in &ang {
                    for &(p2, w2) in &ang {
                        let k = k_from_unitary(unitary_from_angles(phi, theta, p1, p2));
                        let h = iwasawa_a(&mul(&k, g)).expect("kg is symplectic");
                        s += (plus.eval(&h)).exp() * (w1 * w2);
                    }
                }
                s * (wt * wp * (2.0 * theta).sin())
            });
            let total_mass = 8.0 * PI * PI * PI;
            Ok(csum(parts) / total_mass)
        }
        SphericalRoute::U { n, l, n_theta } => {
            let minus = r.add(&nu.neg());
            let v = integrate_u(UQuadrature { n, l, n_theta }, par, |u| {
                let h1 = a_ju_g(u.x, u.a, u.b, u.c, g);
                let h0 = a_ju_from_invariants(u.e, u.p);
                (plus.eval(&h1) + minus.eval(&h0)).exp()
            });
            Ok(v / U_MEASURE)
        }
    }
}
