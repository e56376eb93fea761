//! Spectral transforms on the geometric side: the identity-cell integral
//! ∫ h(−iν)W(iν, p1)W(−iν, p2) dν/(c(iν)c(−iν)) and the smoothed cell integrals I_σ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::cfunction::plancherel_density;
use super::iwasawa::{diag4, from_ints, iwasawa_parts, mul, u4, Mat4};
use super::quad::gl_interval;
use super::spectral::SpectralTestFn;
use super::whittaker::{jacquet_factor, whittaker_unnormalized, KernelIntegral, WhittakerOptions};
use super::{APoint, ArchError, SpectralParam};
use crate::exact_group::{CellTag, CharacterIndex};
use crate::parallel::{map_range, Parallelism};

/// The diagonal part of t_𝐦⁻¹·t modulo the centre, as a point of A⁺. For m2 < 0 the
/// diagonal carries a sign which W does not see; absolute values are used.
pub fn reduced_point(t: &APoint, m: CharacterIndex) -> APoint {
    let (m1, m2) = (m.m1.unsigned_abs() as f64, m.m2.unsigned_abs() as f64);
    APoint { a1: t.a1 * m2.sqrt(), a2: t.a2 * m1 * m2.sqrt() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fold {
    /// Integrate over 0 ≤ ν1 ≤ ν2 and multiply by 8.
    Chamber,
    /// Integrate over the whole square [−R, R]².
    FullPlane,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SpectralQuadrature {
    /// Gauss–Legendre points along each direction.
    pub n: usize,
    /// h(−iν) is dropped below this level.
    pub threshold: f64,
    pub fold: Fold,
    pub whittaker: WhittakerOptions,
}

impl Default for SpectralQuadrature {
    fn default() -> Self {
        SpectralQuadrature { n: 24, threshold: 1e-12, fold: Fold::Chamber, whittaker: WhittakerOptions::default() }
    }
}

/// Nodes (ν1, ν2, weight) for an integral of a Weyl-invariant function over 𝔞*.
pub fn spectral_nodes(radius: f64, q: &SpectralQuadrature) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    match q.fold {
        Fold::Chamber => {
            // ν2 = r ∈ [0, R], ν1 = r·s with s ∈ [0, 1].
            let rs = gl_interval(q.n, 0.0, radius);
            let ss = gl_interval(q.n.div_ceil(2).max(4), 0.0, 1.0);
            for &(r, wr) in &rs {
                for &(s, ws) in &ss {
                    out.push((r * s, r, 8.0 * wr * ws * r));
                }
            }
        }
        Fold::FullPlane => {
            let xs = gl_interval(2 * q.n, -radius, radius);
            for &(a, wa) in &xs {
                for &(b, wb) in &xs {
                    out.push((a, b, wa * wb));
                }
            }
        }
    }
    out
}

/// ∫_{𝔞*} h(−iν)·W(iν, t_{𝐦1}⁻¹t1, ψ)·W(−iν, t_{𝐦2}⁻¹t2, ψ̄)·dν/(c(iν)c(−iν)).
pub fn identity_transform(
    h: &SpectralTestFn,
    t1: &APoint,
    t2: &APoint,
    m1: CharacterIndex,
    m2: CharacterIndex,
    q: &SpectralQuadrature,
    par: Parallelism,
) -> Result<Complex64, ArchError> {
    let Some(radius) = h.support_radius(q.threshold) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let (p1, p2) = (reduced_point(t1, m1), reduced_point(t2, m2));
    let nodes = spectral_nodes(radius, q);
    let vals = map_range(par, nodes.len(), |k| -> Result<Complex64, ArchError> {
        let (n1, n2, w) = nodes[k];
        let dens = plancherel_density(n1, n2);
        if dens == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let nu = SpectralParam::imag(n1, n2);
        let hv = h.on_tempered(n1, n2);
        let w1 = whittaker_unnormalized(&nu, &p1, &q.whittaker)?;
        let w2 = whittaker_unnormalized(&nu.neg(), &p2, &q.whittaker)?;
        Ok(hv * w1 * w2 * (dens * w))
    });
    vals.into_iter().sum()
}

/// W(ν, ·) on A⁺ for one fixed ν, with the Bessel factors tabulated once on a global
/// log grid; each evaluation is a plain 2-dim trapezoid sum over that grid.
pub struct WhittakerTable {
    nu: SpectralParam,
    lo: f64,
    h: f64,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    factor: Complex64,
}

impl WhittakerTable {
    pub fn new(nu: SpectralParam, lo: f64, hi: f64, h: f64) -> Result<Self, ArchError> {
        let n = ((hi - lo) / h).ceil() as usize;
        let (mu1, mu2) = (0.5 * (nu.nu2 - nu.nu1), 0.5 * (nu.nu1 + nu.nu2));
        let ts: Vec<f64> = (0..=n).map(|k| lo + k as f64 * h).collect();
        let kv = |mu: Complex64| -> Result<Vec<Complex64>, ArchError> {
            ts.iter().map(|&t| super::special::bessel_k(mu, 2.0 * PI * t.exp())).collect()
        };
        Ok(WhittakerTable { nu, lo, h, k1: kv(mu1)?, k2: kv(mu2)?, factor: jacquet_factor(&nu)? })
    }

    pub fn nu(&self) -> &SpectralParam {
        &self.nu
    }

    /// Unnormalized W(ν, a, ψ).
    pub fn eval(&self, a: &APoint) -> Complex64 {
        let ker = KernelIntegral {
            mu1: Complex64::new(0.0, 0.0),
            mu2: Complex64::new(0.0, 0.0),
            kappa: 2.0 * PI,
            alpha: a.a2 * a.a2,
            beta: 1.0 / (a.a1 * a.a1),
            gamma: a.a1 * a.a1,
        };
        let (wlo, whi) = ker.window(45.0);
        let n = self.k1.len();
        let i0 = (((wlo - self.lo) / self.h).floor().max(0.0)) as usize;
        let i1 = ((((whi - self.lo) / self.h).ceil()) as usize).min(n - 1);
        if i0 > i1 {
            return Complex64::new(0.0, 0.0);
        }
        let et: Vec<f64> = (i0..=i1).map(|k| (self.lo + k as f64 * self.h).exp()).collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (ii, &ei) in et.iter().enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for (jj, &ej) in et.iter().enumerate() {
                let p = ei * ej;
                let r = ei / ej;
                let e = -PI * (ker.alpha / p + ker.beta * p + ker.gamma * (r + 1.0 / r));
                if e > -745.0 {
                    row += self.k2[i0 + jj] * e.exp();
                }
            }
            total += self.k1[i0 + ii] * row;
        }
        total * (self.h * self.h * 2.0 * a.a1 * a.a2 * a.a2) * self.factor
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ISigmaOptions {
    /// Truncation radius of the u1-integral.
    pub r: f64,
    /// Trapezoid points per u1-coordinate.
    pub n_u: usize,
    pub spectral: SpectralQuadrature,
    /// Log-range and points of the interpolation grid for the ν-integrated Whittaker factor.
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_n: usize,
    /// Step of the tabulated Bessel factors.
    pub table_h: f64,
    /// When set, a relative R-doubling diagnostic above it is an error.
    pub fail_above: Option<f64>,
}

impl Default for ISigmaOptions {
    fn default() -> Self {
        ISigmaOptions {
            r: 2.0,
            n_u: 12,
            spectral: SpectralQuadrature { n: 12, ..SpectralQuadrature::default() },
            grid_lo: -4.0,
            grid_hi: 3.0,
            grid_n: 22,
            table_h: 0.08,
            fail_above: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ISigmaValue {
    pub value: Complex64,
    pub value_half_radius: Complex64,
    /// |I(R) − I(R/2)| / |I(R)|.
    pub diagnostic: f64,
    pub r: f64,
    pub dimension: usize,
}

/// G(a) = ∫ h(−iν) W(iν, p1) W(−iν, a) dν/(c(iν)c(−iν)), tabulated on a log grid of a.
pub struct SpectralKernel {
    lo: f64,
    step: f64,
    n: usize,
    values: Vec<Complex64>,
}

impl SpectralKernel {
    pub fn build(h: &SpectralTestFn, p1: &APoint, o: &ISigmaOptions, par: Parallelism) -> Result<Self, ArchError> {
        let n = o.grid_n;
        let step = (o.grid_hi - o.grid_lo) / (n - 1) as f64;
        let Some(radius) = h.support_radius(o.spectral.threshold) else {
            return Ok(SpectralKernel { lo: o.grid_lo, step, n, values: vec![Complex64::new(0.0, 0.0); n * n] });
        };
        let nodes = spectral_nodes(radius, &o.spectral);
        // Both Bessel tables must cover the windows of every grid point.
        let (tlo, thi) = (2.0 * o.grid_lo - 12.0, 2.0 * o.grid_hi.max(0.0) + 4.0);
        let weights = map_range(par, nodes.len(), |k| -> Result<(Complex64, WhittakerTable), ArchError> {
            let (n1, n2, w) = nodes[k];
            let nu = SpectralParam::imag(n1, n2);
            let dens = plancherel_density(n1, n2);
            let w1 = whittaker_unnormalized(&nu, p1, &o.spectral.whittaker)?;
            let table = WhittakerTable::new(nu.neg(), tlo, thi, o.table_h)?;
            Ok((h.on_tempered(n1, n2) * w1 * (dens * w), table))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
        let values = map_range(par, n * n, |idx| {
            let a = APoint { a1: (o.grid_lo + (idx / n) as f64 * step).exp(), a2: (o.grid_lo + (idx % n) as f64 * step).exp() };
            weights.iter().map(|(c, t)| c * t.eval(&a)).sum()
        });
        Ok(SpectralKernel { lo: o.grid_lo, step, n, values })
    }

    /// Bilinear interpolation in log coordinates; zero outside the grid.
    pub fn eval(&self, a: &APoint) -> Complex64 {
        let (x, y) = ((a.a1.ln() - self.lo) / self.step, (a.a2.ln() - self.lo) / self.step);
        let top = (self.n - 1) as f64;
        if !(x >= 0.0 && y >= 0.0 && x <= top && y <= top) {
            return Complex64::new(0.0, 0.0);
        }
        let (i, j) = ((x.floor() as usize).min(self.n - 2), (y.floor() as usize).min(self.n - 2));
        let (fx, fy) = (x - i as f64, y - j as f64);
        let v = |i: usize, j: usize| self.values[i * self.n + j];
        v(i, j) * ((1.0 - fx) * (1.0 - fy)) + v(i + 1, j) * (fx * (1.0 - fy)) + v(i, j + 1) * ((1.0 - fx) * fy) + v(i + 1, j + 1) * (fx * fy)
    }
}

/// ∫_{|r|<1} (1 − r²)³ dr over the unit ball of ℝ^d (d = 3, 4).
pub fn window_volume(d: usize) -> f64 {
    match d {
        3 => 64.0 * PI / 315.0,
        4 => PI * PI / 20.0,
        _ => panic!("window volume only needed in dimension 3 or 4"),
    }
}

fn window(r2: f64) -> f64 {
    if r2 >= 1.0 {
        0.0
    } else {
        let s = 1.0 - r2;
        s * s * s
    }
}

fn diag_gsp(d: [f64; 4]) -> Mat4 {
    diag4(d)
}

/// The matrix t_{𝐦1}⁻¹·σ·diag(d1, 1, d2, d1d2)·t_{𝐦2}, its multiplier, and the right factor t_{𝐦2}⁻¹t2.
fn cell_frame(sigma: CellTag, d1: f64, d2: f64, m1: CharacterIndex, m2: CharacterIndex, t2: &APoint) -> (Mat4, Mat4, f64) {
    let tm = |m: CharacterIndex| {
        let (a, b) = (m.m1 as f64, m.m2 as f64);
        [a, 1.0, a * b, a * a * b]
    };
    let inv = |d: [f64; 4]| diag_gsp([1.0 / d[0], 1.0 / d[1], 1.0 / d[2], 1.0 / d[3]]);
    let s = from_ints(sigma.weyl().rows());
    let delta = diag_gsp([d1, 1.0, d2, d1 * d2]);
    let left = mul(&mul(&inv(tm(m1)), &s), &mul(&delta, &diag_gsp(tm(m2))));
    let right = mul(&inv(tm(m2)), &t2.matrix());
    // μ(t_𝐦) = m1²m2 cancels between t_{𝐦2} and t_{𝐦2}⁻¹ but not for t_{𝐦1}⁻¹.
    let mu1 = (m1.m1 * m1.m1 * m1.m2) as f64;
    (left, right, d1 * d2 / mu1)
}

/// EXPERIMENTAL. I_σ(h)(d1, d2) with the u1-integral over U_σ\U smoothed by (1 − |u1|²/R²)³.
/// Returns the value at R with the relative change from R/2 as a convergence diagnostic.
#[allow(clippy::too_many_arguments)]
pub fn i_sigma_transform(
    sigma: CellTag,
    h: &SpectralTestFn,
    d1: f64,
    d2: f64,
    t1: &APoint,
    t2: &APoint,
    m1: CharacterIndex,
    m2: CharacterIndex,
    o: &ISigmaOptions,
    par: Parallelism,
) -> Result<ISigmaValue, ArchError> {
    let kernel = SpectralKernel::build(h, &reduced_point(t1, m1), o, par)?;
    i_sigma_with_kernel(sigma, &kernel, d1, d2, t2, m1, m2, o, par)
}

/// As [`i_sigma_transform`] with a precomputed ν-integrated kernel (shared by all terms of a run).
#[allow(clippy::too_many_arguments)]
pub fn i_sigma_with_kernel(
    sigma: CellTag,
    kernel: &SpectralKernel,
    d1: f64,
    d2: f64,
    t2: &APoint,
    m1: CharacterIndex,
    m2: CharacterIndex,
    o: &ISigmaOptions,
    par: Parallelism,
) -> Result<ISigmaValue, ArchError> {
    if d1 == 0.0 || d2 == 0.0 {
        return Err(ArchError::DomainError("torus entries must be nonzero"));
    }
    let (left, right, mu) = cell_frame(sigma, d1, d2, m1, m2, t2);
    let dimension = match sigma {
        CellTag::J => 4,
        _ => 3,
    };
    let eps = if mu < 0.0 { diag4([1.0, 1.0, -1.0, -1.0]) } else { diag4([1.0; 4]) };
    let norm = 1.0 / mu.abs().sqrt();
    let integrate = |r: f64| -> Complex64 {
        let n = o.n_u;
        let step = 2.0 * r / (n - 1) as f64;
        let coords = |k: usize| -r + k as f64 * step;
        let outer = n.pow(dimension as u32 - 2);
        let parts = map_range(par, outer, |idx| {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    // Quotient coordinates: J uses (x, a, b, c); 121 drops c; 212 drops x.
                    let mut v = [0.0; 4];
                    let mut free = vec![coords(i), coords(j)];
                    if dimension == 4 {
                        free.push(coords(idx / n));
                        free.push(coords(idx % n));
                    } else {
                        free.push(coords(idx));
                    }
                    match sigma {
                        CellTag::J => v.copy_from_slice(&free),
                        CellTag::W121 => v[..3].copy_from_slice(&free),
                        CellTag::W212 => v[1..].copy_from_slice(&free),
                    }
                    let r2 = v.iter().map(|z| z * z).sum::<f64>() / (r * r);
                    let wgt = window(r2);
                    if wgt == 0.0 {
                        continue;
                    }
                    let g = mul(&mul(&left, &mul(&u4(v[0], v[1], v[2], v[3]), &right)), &eps);
                    let g = super::iwasawa::scale(&g, norm);
                    let Ok(parts) = iwasawa_parts(&g) else { continue };
                    let a = parts.a.exp();
                    let phase = -2.0 * PI * ((v[0] + v[3]) + (parts.n[0] + parts.n[3]));
                    s += kernel.eval(&a) * Complex64::from_polar(wgt, phase);
                }
            }
            s
        });
        parts.into_iter().sum::<Complex64>() * step.powi(dimension as i32)
    };
    let value = integrate(o.r);
    let half = integrate(0.5 * o.r);
    let diagnostic = (value - half).norm() / value.norm().max(1e-300);
    if let Some(th) = o.fail_above {
        if diagnostic > th {
            return Err(ArchError::NoConvergence(diagnostic));
        }
    }
    Ok(ISigmaValue { value, value_half_radius: half, diagnostic, r: o.r, dimension })
}

/// Integrand of I_σ at u1 = 1 (the small-R limit per unit window volume).
pub fn i_sigma_at_origin(
    sigma: CellTag,
    kernel: &SpectralKernel,
    d1: f64,
    d2: f64,
    t2: &APoint,
    m1: CharacterIndex,
    m2: CharacterIndex,
) -> Result<Complex64, ArchError> {
    let (left, right, mu) = cell_frame(sigma, d1, d2, m1, m2, t2);
    let eps = if mu < 0.0 { diag4([1.0, 1.0, -1.0, -1.0]) } else { diag4([1.0; 4]) };
    let g = super::iwasawa::scale(&mul(&mul(&left, &right), &eps), 1.0 / mu.abs().sqrt());
    let parts = iwasawa_parts(&g)?;
    let phase = -2.0 * PI * (parts.n[0] + parts.n[3]);
    Ok(kernel.eval(&parts.a.exp()) * Complex64::from_polar(1.0, phase))
}
