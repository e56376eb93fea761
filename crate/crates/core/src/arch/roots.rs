//! Root data of sp4 on 𝔞 = {diag(h1, h2, −h1, −h2)}, with pairings taken from the
//! Killing form ⟨X, Y⟩ = 6·Tr(XY).

use serde::Serialize;

use super::{LieAElement, SpectralParam};

pub const KILLING_SCALE: f64 = 6.0;

/// A root as a linear form (c1, c2): H ↦ c1·h1 + c2·h2.
pub type Root = [f64; 2];

#[derive(Clone, Debug, Serialize)]
pub struct RootSystemData {
    pub roots: Vec<Root>,
    pub positive: Vec<Root>,
    pub rho: [f64; 2],
    pub killing_scale: f64,
}

/// ⟨H, H'⟩ = 6·Tr(HH') on diagonal elements.
pub fn killing(h: &LieAElement, g: &LieAElement) -> f64 {
    let d = [h.h1, h.h2, -h.h1, -h.h2];
    let e = [g.h1, g.h2, -g.h1, -g.h2];
    KILLING_SCALE * d.iter().zip(&e).map(|(a, b)| a * b).sum::<f64>()
}

/// The form λ on 𝔞* transported by the Killing form: ⟨λ, μ⟩ = ⟨A_λ, A_μ⟩ with λ(H) = ⟨A_λ, H⟩.
pub fn dual_pairing(l: [f64; 2], m: [f64; 2]) -> f64 {
    // The Gram matrix of the basis (diag(1,0,−1,0), diag(0,1,0,−1)) is diagonal; invert it.
    let e1 = LieAElement::new(1.0, 0.0);
    let e2 = LieAElement::new(0.0, 1.0);
    let g11 = killing(&e1, &e1);
    let g22 = killing(&e2, &e2);
    debug_assert!(killing(&e1, &e2) == 0.0);
    l[0] * m[0] / g11 + l[1] * m[1] / g22
}

impl RootSystemData {
    pub fn sp4() -> Self {
        // Roots of sp4 on 𝔞: ±2e1, ±2e2, ±(e1 − e2), ±(e1 + e2).
        let mut roots: Vec<Root> = Vec::new();
        for r in [[2.0, 0.0], [0.0, 2.0], [1.0, -1.0], [1.0, 1.0]] {
            roots.push(r);
            roots.push([-r[0], -r[1]]);
        }
        // Positive on the chamber 0 < h1 < h2; test on an interior point.
        let probe = LieAElement::new(1.0, 2.5);
        let positive: Vec<Root> =
            roots.iter().copied().filter(|r| r[0] * probe.h1 + r[1] * probe.h2 > 0.0).collect();
        let mut rho = [0.0, 0.0];
        for r in &positive {
            rho[0] += 0.5 * r[0];
            rho[1] += 0.5 * r[1];
        }
        RootSystemData { roots, positive, rho, killing_scale: KILLING_SCALE }
    }

    pub fn rho_param(&self) -> SpectralParam {
        SpectralParam::real(self.rho[0], self.rho[1])
    }

    /// α0 = α/⟨α, α⟩ as a form.
    pub fn alpha0(alpha: Root) -> [f64; 2] {
        let n = dual_pairing(alpha, alpha);
        [alpha[0] / n, alpha[1] / n]
    }

    /// ⟨ν, α0⟩ for complex ν.
    pub fn pairing(nu: &SpectralParam, alpha: Root) -> num_complex::Complex64 {
        let a0 = Self::alpha0(alpha);
        let e1 = dual_pairing([1.0, 0.0], a0);
        let e2 = dual_pairing([0.0, 1.0], a0);
        nu.nu1 * e1 + nu.nu2 * e2
    }

    /// ⟨ν, α0⟩ over the positive roots.
    pub fn positive_pairings(&self, nu: &SpectralParam) -> Vec<num_complex::Complex64> {
        self.positive.iter().map(|&a| Self::pairing(nu, a)).collect()
    }
}

pub fn sp4() -> &'static RootSystemData {
    static DATA: std::sync::OnceLock<RootSystemData> = std::sync::OnceLock::new();
    DATA.get_or_init(RootSystemData::sp4)
}

/// ρ as a spectral parameter.
pub fn rho() -> SpectralParam {
    sp4().rho_param()
}
