//! S(a,b,d,N) = Σ_{x,y mod N, d | xy} e((ax+by)/N).

use num_complex::Complex64;
use std::sync::atomic::{AtomicBool, Ordering};

use super::SumError;
use crate::parallel::{self, Parallelism};

/// Arguments of S(a,b,d,N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ElementarySumSpec {
    pub a: i64,
    pub b: i64,
    pub d: u64,
    pub n: u64,
}

impl ElementarySumSpec {
    pub fn new(a: i64, b: i64, d: u64, n: u64) -> Result<Self, SumError> {
        if n == 0 || d == 0 || n % d != 0 {
            return Err(SumError::InvalidSpec("need positive d dividing positive N"));
        }
        Ok(ElementarySumSpec { a, b, d, n })
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Trial division; returns (p, e) pairs in increasing order of p.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// v_p(a) capped at cap, with v_p(0) = cap.
pub fn capped_valuation(a: i64, p: u64, cap: u32) -> u32 {
    if a == 0 {
        return cap;
    }
    let mut a = a.unsigned_abs();
    let mut v = 0;
    while v < cap && a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

/// Direct double loop. Residues of ax+by are counted per class mod N, so the result does
/// not depend on how the x-range is split across threads.
pub fn s_bruteforce(spec: &ElementarySumSpec, par: Parallelism) -> Complex64 {
    let n = spec.n as usize;
    let counts = residue_counts(spec, par);
    let table = unit_roots(n);
    counts.iter().zip(&table).map(|(&c, &z)| z * c as f64).sum()
}

/// Like s_bruteforce, validated to be a real integer within tol and rounded.
pub fn s_bruteforce_int(spec: &ElementarySumSpec, par: Parallelism, tol: f64) -> Result<i128, SumError> {
    round_to_integer(s_bruteforce(spec, par), tol)
}

pub fn round_to_integer(z: Complex64, tol: f64) -> Result<i128, SumError> {
    let r = z.re.round();
    if z.im.abs() > tol || (z.re - r).abs() > tol {
        return Err(SumError::NotInteger { re: z.re, im: z.im });
    }
    Ok(r as i128)
}

fn residue_counts(spec: &ElementarySumSpec, par: Parallelism) -> Vec<u64> {
    let n = spec.n;
    let a = spec.a.rem_euclid(n as i64) as u64;
    let b = spec.b.rem_euclid(n as i64) as u64;
    let row = |x: usize| {
        let x = x as u64;
        let mut c = vec![0u64; n as usize];
        let ax = a * x % n;
        for y in 0..n {
            if (x * y) % spec.d == 0 {
                c[((ax + b * y) % n) as usize] += 1;
            }
        }
        c
    };
    let rows = parallel::map_range(par, n as usize, row);
    let mut total = vec![0u64; n as usize];
    for r in rows {
        for (t, v) in total.iter_mut().zip(r) {
            *t += v;
        }
    }
    total
}

fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// Mutation hook for self-test smoke runs: when set, s_primepower flips the sign of its
/// indicator term, which any oracle comparison must catch.
#[doc(hidden)]
pub static FLIP_PRIMEPOWER_SIGN: AtomicBool = AtomicBool::new(false);

/// S(pⁱ,pʲ,pᵏ,pⁿ) by the prime-power closed form, for n ≥ 1 and k ≤ n.
pub fn s_primepower(i: u32, j: u32, k: u32, n: u32, p: u64) -> Result<i128, SumError> {
    if k > n {
        return Err(SumError::InvalidSpec("k must not exceed n"));
    }
    if n == 0 {
        return Ok(1);
    }
    let p = p as i128;
    let base = p.pow(2 * n - k - 1);
    let (i, j, k, n) = (i as i64, j as i64, k as i64, n as i64);
    let width = (k + 1 - (n - i).max(0) - (n - j).max(0)).max(0);
    let mut ind = i128::from(i >= n && j >= n) - i128::from(i < n && j < n && i + j >= 2 * n - k - 1);
    if FLIP_PRIMEPOWER_SIGN.load(Ordering::Relaxed) {
        ind = -ind;
    }
    Ok(base * (p - 1) * width as i128 + base * ind)
}

/// Nonvanishing condition at p: (n−i)⁺ + (n−j)⁺ ≤ k+1.
pub fn primepower_may_be_nonzero(i: u32, j: u32, k: u32, n: u32) -> bool {
    n.saturating_sub(i) + n.saturating_sub(j) <= k + 1
}

/// Product of local prime-power values over the factorization of N.
pub fn s_closed(spec: &ElementarySumSpec) -> i128 {
    factorize(spec.n)
        .into_iter()
        .map(|(p, e)| {
            let i = capped_valuation(spec.a, p, e);
            let j = capped_valuation(spec.b, p, e);
            let k = capped_valuation(spec.d as i64, p, e);
            s_primepower(i, j, k, e, p).expect("k ≤ n since d | N")
        })
        .product()
}

/// Whether the nonvanishing condition holds at every prime dividing N.
pub fn nonvanishing_criterion(spec: &ElementarySumSpec) -> bool {
    factorize(spec.n).into_iter().all(|(p, e)| {
        primepower_may_be_nonzero(
            capped_valuation(spec.a, p, e),
            capped_valuation(spec.b, p, e),
            capped_valuation(spec.d as i64, p, e),
            e,
        )
    })
}
