//! Contribution of the identity orbit to the geometric side.

use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use super::dirichlet::DirichletChar;
use super::elementary::{round_to_integer, s_closed, ElementarySumSpec};
use super::SumError;
use crate::exact_group::CharacterIndex;

type R = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct IdentityContribution {
    pub nonzero: bool,
    pub s: i64,
    pub t: i64,
    pub d: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    /// gcd(s, n/s, t, n/t), the form used in the main theorem; audited against d.
    pub d_theorem: i64,
    pub sum_term: i128,
    /// n·d/|s³d₁|.
    pub prefactor: R,
    pub omega_bar_s: Complex64,
    /// ω̄(s)·prefactor·sum_term, modulo the volume normalization.
    pub value: Complex64,
    /// T(n,m₁,m₂) of the main theorem, evaluated from its own formula.
    pub t_factor: Complex64,
}

impl IdentityContribution {
    fn zero() -> Self {
        IdentityContribution {
            nonzero: false,
            s: 0,
            t: 0,
            d: 0,
            big_d: 0,
            d_theorem: 0,
            sum_term: 0,
            prefactor: R::zero(),
            omega_bar_s: Complex64::zero(),
            value: Complex64::zero(),
            t_factor: Complex64::zero(),
        }
    }
}

/// Torus data of the unique relevant identity orbit: s > 0, d₁, t = s·d₁, D = gcd(t, n/s).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityData {
    pub s: i64,
    pub d1: R,
    pub d2: R,
    pub t: i64,
    pub big_d: i64,
}

/// Solves d₁ = m₁₁/m₂₁, d₂ = m₁₁m₁₂/(m₂₁m₂₂), d₁d₂ = ±n/s² with s | n and s·d₁ an integer
/// dividing n. None when no such s exists.
pub fn identity_setup(n: u64, m1: CharacterIndex, m2: CharacterIndex) -> Option<IdentityData> {
    let n = n as i128;
    let d1 = R::new(m1.m1 as i128, m2.m1 as i128);
    let d2 = R::new(m1.m1 as i128 * m1.m2 as i128, m2.m1 as i128 * m2.m2 as i128);
    let s2 = R::from_integer(n) / (d1 * d2).abs();
    if !s2.is_integer() {
        return None;
    }
    let s2 = s2.to_integer();
    let s = s2.sqrt();
    if s * s != s2 || n % s != 0 {
        return None;
    }
    let t = d1 * s;
    if !t.is_integer() || n % t.to_integer() != 0 {
        return None;
    }
    let t = t.to_integer();
    let big_d = t.abs().gcd(&(n / s));
    Some(IdentityData { s: s as i64, d1, d2, t: t as i64, big_d: big_d as i64 })
}

/// gcd on ℚ: the positive generator of aℤ + bℤ.
pub fn rational_gcd(a: R, b: R) -> R {
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    R::new(num, a.denom() * b.denom())
}

fn check_pre(n: u64, level: u64, omega: &DirichletChar) -> Result<(), SumError> {
    if n == 0 || level == 0 {
        return Err(SumError::InvalidSpec("n and N must be positive"));
    }
    if n.gcd(&level) != 1 {
        return Err(SumError::InvalidSpec("n and N must be coprime"));
    }
    if omega.modulus() != level {
        return Err(SumError::InvalidSpec("character modulus must equal N"));
    }
    Ok(())
}

pub fn identity_contribution(
    n: u64,
    level: u64,
    m1: CharacterIndex,
    m2: CharacterIndex,
    omega: &DirichletChar,
) -> Result<IdentityContribution, SumError> {
    identity_contribution_signed(n, level, m1, m2, omega, 1)
}

/// Same as identity_contribution with s replaced by sign·s (sign = ±1) throughout the formula.
pub fn identity_contribution_signed(
    n: u64,
    level: u64,
    m1: CharacterIndex,
    m2: CharacterIndex,
    omega: &DirichletChar,
    sign: i64,
) -> Result<IdentityContribution, SumError> {
    check_pre(n, level, omega)?;
    let Some(data) = identity_setup(n, m1, m2) else {
        return Ok(IdentityContribution::zero());
    };
    let ni = n as i64;
    let s = sign * data.s;
    let t = sign * data.t;
    let big_d = data.big_d;
    let dq = rational_gcd(R::from_integer(big_d as i128), R::from_integer(big_d as i128) / data.d1);
    if !dq.is_integer() {
        return Err(SumError::NonIntegral("gcd(D, D/d1)"));
    }
    let d = dq.to_integer() as i64;
    let (sa, ta) = (data.s, data.t.abs());
    let d_theorem = sa.gcd(&(ni / sa)).gcd(&ta).gcd(&(ni / ta));

    let spec = ElementarySumSpec::new(m1.m1 * (ni / big_d), m1.m2 * t, d as u64, n)?;
    let sum_term = s_closed(&spec);
    let s3d1 = (R::from_integer((s as i128).pow(3)) * data.d1).abs();
    let prefactor = R::from_integer(n as i128 * d as i128) / s3d1;
    let omega_bar_s = omega.eval_conj(s);
    let value = omega_bar_s * ratio_f64(prefactor) * sum_term as f64;

    // T(n,m₁,m₂) = d·ω̄(s)·n^{-1/2}(m₁₁m₂₁)^{-2}|m₁₂m₂₂|^{-3/2}·S(m₁₁·n/gcd(t,n/s), m₁₂t, d, n)
    let d_t = ta.gcd(&(ni / sa));
    let spec_t = ElementarySumSpec::new(m1.m1 * (ni / d_t), m1.m2 * t, d_theorem as u64, n)?;
    let mm = (m1.m1 as f64 * m2.m1 as f64).powi(-2) * (m1.m2 as f64 * m2.m2 as f64).abs().powf(-1.5);
    let t_factor = omega_bar_s * (d_theorem as f64 * (n as f64).powf(-0.5) * mm * s_closed(&spec_t) as f64);

    Ok(IdentityContribution {
        nonzero: sum_term != 0,
        s,
        t,
        d,
        big_d,
        d_theorem,
        sum_term,
        prefactor,
        omega_bar_s,
        value,
        t_factor,
    })
}

/// Exact real part of an oracle, before the factor ω̄(s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleValue {
    pub exact: R,
    pub value: Complex64,
}

/// The finite residue sums left after integrating out b:
/// n³/|s⁵D²d₁| · Σ_{a mod D/d₁} Σ_{x,y mod sD, xy ≡ Da mod D/d₁} e(m₁₁x/D + m₁₂·t·y/n).
pub fn identity_contribution_oracle(
    n: u64,
    level: u64,
    m1: CharacterIndex,
    m2: CharacterIndex,
    omega: &DirichletChar,
) -> Result<OracleValue, SumError> {
    check_pre(n, level, omega)?;
    let data = identity_setup(n, m1, m2).ok_or(SumError::ConditionsNotMet)?;
    let ni = n as i64;
    let big_d = data.big_d;
    let dd1 = R::from_integer(big_d as i128) / data.d1;
    if !dd1.is_integer() {
        return Err(SumError::ConditionsNotMet);
    }
    let dd1 = dd1.to_integer().abs() as i64;
    let range = data.s * big_d;
    // m₁₁x/D + m₁₂ty/n = (m₁₁(n/D)x + m₁₂ty)/n since D | n.
    let cx = m1.m1 * (ni / big_d);
    let cy = m1.m2 * data.t;
    let mut counts = vec![0i64; n as usize];
    for a in 0..dd1 {
        for x in 0..range {
            for y in 0..range {
                if (x * y - big_d * a).rem_euclid(dd1) == 0 {
                    counts[(cx * x + cy * y).rem_euclid(ni) as usize] += 1;
                }
            }
        }
    }
    let tot = round_to_integer(sum_roots(&counts), 1e-6)?;
    let s = data.s as i128;
    let denom = (R::from_integer(s.pow(5) * (big_d as i128).pow(2)) * data.d1).abs();
    let exact = R::from_integer((n as i128).pow(3)) / denom * R::from_integer(tot);
    Ok(OracleValue { exact, value: omega.eval_conj(data.s) * ratio_f64(exact) })
}

/// A second oracle that integrates the characteristic function of the local conditions over
/// x ∈ ℤ/qD, c' ∈ ℤ/lcm(qD, P), a ∈ ℤ/qD (d₁ = p/q, P = |n/t|) with the Haar measure
/// normalized on those lattices, without the proof's reduction to a triple sum.
pub fn identity_contribution_lattice_oracle(
    n: u64,
    level: u64,
    m1: CharacterIndex,
    m2: CharacterIndex,
    omega: &DirichletChar,
) -> Result<OracleValue, SumError> {
    check_pre(n, level, omega)?;
    let data = identity_setup(n, m1, m2).ok_or(SumError::ConditionsNotMet)?;
    let ni = n as i64;
    let big_d = data.big_d;
    let p = *data.d1.numer() as i64;
    let q = *data.d1.denom() as i64;
    let pp = (ni / data.t).abs();
    let sgn = data.t.signum();
    let mx = q * big_d;
    let mc = mx.lcm(&pp);
    let ma = q * big_d;
    let modulus = big_d * pp;
    let mut counts = vec![0i64; modulus as usize];
    for x in 0..mx {
        for c in 0..mc {
            let cnt = (0..ma).filter(|&a| (p * (big_d * a - c * x)).rem_euclid(q * big_d) == 0).count() as i64;
            if cnt > 0 {
                // m₁₁x/D + m₁₂c'/(n/t) over the common denominator D·P
                let k = m1.m1 * x * pp + m1.m2 * sgn * c * big_d;
                counts[k.rem_euclid(modulus) as usize] += cnt;
            }
        }
    }
    let tot = round_to_integer(sum_roots(&counts), 1e-6)?;
    let exact = R::new(ni as i128, data.s as i128)
        * R::from_integer(big_d as i128 * (pp as i128).pow(2))
        * R::new(tot, (mx * mc * ma) as i128);
    Ok(OracleValue { exact, value: omega.eval_conj(data.s) * ratio_f64(exact) })
}

fn sum_roots(counts: &[i64]) -> Complex64 {
    let n = counts.len() as f64;
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / n))
        .sum()
}

pub fn ratio_f64(r: R) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
