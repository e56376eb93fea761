//! Iwasawa A-part for real symplectic matrices: g ∈ U·exp(A(g))·K∞.

use num_complex::Complex64;

use super::{ArchError, LieAElement};

pub type Mat4 = [[f64; 4]; 4];

pub fn diag4(d: [f64; 4]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
}

pub fn identity4() -> Mat4 {
    diag4([1.0; 4])
}

pub fn j4() -> Mat4 {
    [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0], [-1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0]]
}

pub fn from_ints(r: [[i64; 4]; 4]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = r[i][j] as f64;
        }
    }
    m
}

/// u(x, a, b, c).
pub fn u4(x: f64, a: f64, b: f64, c: f64) -> Mat4 {
    [[1.0, 0.0, c, a - c * x], [x, 1.0, a, b], [0.0, 0.0, 1.0, -x], [0.0, 0.0, 0.0, 1.0]]
}

pub fn mul(p: &Mat4, q: &Mat4) -> Mat4 {
    let mut r = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let pik = p[i][k];
            if pik == 0.0 {
                continue;
            }
            for j in 0..4 {
                r[i][j] += pik * q[k][j];
            }
        }
    }
    r
}

pub fn transpose(p: &Mat4) -> Mat4 {
    let mut r = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = p[j][i];
        }
    }
    r
}

pub fn scale(p: &Mat4, s: f64) -> Mat4 {
    let mut r = *p;
    r.iter_mut().flatten().for_each(|v| *v *= s);
    r
}

/// max |gᵀJg − J| relative to max(1, |g|²).
pub fn symplectic_defect(g: &Mat4) -> f64 {
    let j = j4();
    let m = mul(&transpose(g), &mul(&j, g));
    let norm = g.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut d = 0.0f64;
    for i in 0..4 {
        for k in 0..4 {
            d = d.max((m[i][k] - j[i][k]).abs());
        }
    }
    d / norm.powi(2).max(1.0)
}

/// Coordinates of the U-part and the A-part of g = n·exp(A)·k.
#[derive(Clone, Copy, Debug)]
pub struct IwasawaParts {
    /// (x, a, b, c) of n = u(x, a, b, c).
    pub n: [f64; 4],
    pub a: LieAElement,
}

/// In the index order (2, 1, 3, 4) U is upper unitriangular, so g·ᵗg = n·exp(2A)·ᵗn is a
/// UDUᵀ factorization taken from the last index upwards.
pub fn iwasawa_parts(g: &Mat4) -> Result<IwasawaParts, ArchError> {
    let defect = symplectic_defect(g);
    if !(defect < 1e-10) {
        return Err(ArchError::NotSymplectic(defect));
    }
    const PERM: [usize; 4] = [1, 0, 2, 3];
    let ggt = mul(g, &transpose(g));
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = ggt[PERM[i]][PERM[j]];
        }
    }
    let mut l = identity4();
    let mut d = [0.0; 4];
    for j in (0..4).rev() {
        d[j] = m[j][j];
        for i in 0..j {
            l[i][j] = m[i][j] / d[j];
        }
        for i in 0..j {
            for k in 0..j {
                m[i][k] -= l[i][j] * l[k][j] * d[j];
            }
        }
    }
    // Back to the original order: n[PERM[i]][PERM[j]] = l[i][j].
    let mut n = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            n[PERM[i]][PERM[j]] = l[i][j];
        }
    }
    Ok(IwasawaParts {
        n: [n[1][0], n[1][2], n[1][3], n[0][2]],
        a: LieAElement { h1: 0.5 * d[1].ln(), h2: 0.5 * d[0].ln() },
    })
}

pub fn iwasawa_a(g: &Mat4) -> Result<LieAElement, ArchError> {
    Ok(iwasawa_parts(g)?.a)
}

/// A(J·u(x, a, b, c)) in closed form, with a1 = log(1 + x² + a² + b²) and
/// a2 = log((a(a − cx) + 1 − bc)² + (x(a − cx) − b − c)²): A = ((a1 − a2)/2, −a1/2).
pub fn a_ju_closed_form(x: f64, a: f64, b: f64, c: f64) -> LieAElement {
    let (e, p) = ju_invariants(x, a, b, c);
    a_ju_from_invariants(e, p)
}

/// A(Ju) from the two invariants of [`ju_invariants`].
pub fn a_ju_from_invariants(e: f64, p: f64) -> LieAElement {
    let (l1, l2) = (e.ln(), p.ln());
    LieAElement { h1: 0.5 * (l1 - l2), h2: -0.5 * l1 }
}

/// A(J·u(x, a, b, c)·g) from the last row of Ju·g and the Plücker vector of its last two rows.
/// Both are formed from u before g is applied, so the cancellation inside Ju stays exact in
/// form and large coordinates do not lose the small Iwasawa entries.
pub fn a_ju_g(x: f64, a: f64, b: f64, c: f64, g: &Mat4) -> LieAElement {
    let acx = a - c * x;
    let r4 = [x, 1.0, a, b];
    let mut v = [0.0; 4];
    for j in 0..4 {
        v[j] = (0..4).map(|k| r4[k] * g[k][j]).sum();
    }
    let g4: f64 = v.iter().map(|t| t * t).sum();
    // Minors of rows (1, 0, c, a − cx) and (x, 1, a, b), pairs (12, 13, 14, 23, 24, 34).
    let w = [1.0, acx, b - acx * x, -c, -acx, c * b - acx * a];
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut g34 = 0.0;
    for &(p, q) in &PAIRS {
        let mut t = 0.0;
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            t += w[k] * (g[i][p] * g[j][q] - g[i][q] * g[j][p]);
        }
        g34 += t * t;
    }
    LieAElement { h1: 0.5 * (g4.ln() - g34.ln()), h2: -0.5 * g4.ln() }
}

/// The two positive quantities whose logarithms give A(Ju).
pub fn ju_invariants(x: f64, a: f64, b: f64, c: f64) -> (f64, f64) {
    let e = 1.0 + x * x + a * a + b * b;
    let acx = a - c * x;
    let p1 = a * acx + 1.0 - b * c;
    let p2 = x * acx - b - c;
    (e, p1 * p1 + p2 * p2)
}

/// U(2) ∋ X + iY ↦ [[X, Y], [−Y, X]] ∈ Sp4(ℝ) ∩ O(4).
pub fn k_from_unitary(u: [[Complex64; 2]; 2]) -> Mat4 {
    let mut k = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            k[i][j] = u[i][j].re;
            k[i + 2][j + 2] = u[i][j].re;
            k[i][j + 2] = u[i][j].im;
            k[i + 2][j] = -u[i][j].im;
        }
    }
    k
}

/// e^{iφ}·[[α, −β̄], [β, ᾱ]] with α = cos θ e^{iψ1}, β = sin θ e^{iψ2}.
pub fn unitary_from_angles(phi: f64, theta: f64, psi1: f64, psi2: f64) -> [[Complex64; 2]; 2] {
    let ph = Complex64::from_polar(1.0, phi);
    let al = Complex64::from_polar(theta.cos(), psi1);
    let be = Complex64::from_polar(theta.sin(), psi2);
    [[ph * al, -ph * be.conj()], [ph * be, ph * al.conj()]]
}
