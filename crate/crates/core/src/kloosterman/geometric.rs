//! The outer sums K_J, K_121, K_212 of the geometric side, truncated at |s·d| ≤ budget.

use num_complex::Complex64;
use num_integer::Roots;
use num_rational::Ratio;
use num_traits::Signed;

use super::enumerate::EnumOptions;
use super::sums::kloos;
use super::{KloosError, KloostermanSpec};
use crate::arith_sums::DirichletChar;
use crate::exact_group::{CellTag, CharacterIndex};

type R = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct KloosTerm {
    pub cell: CellTag,
    pub s: i64,
    pub d: i64,
    pub m: i64,
    /// 1 for J, m₂₂ for 121, m₂₁ for 212.
    pub prefactor: i64,
    /// Archimedean arguments (d₁, d₂).
    pub d1: R,
    pub d2: R,
    /// False for 121 terms with N² ∤ d: nonempty, but outside the range N | kb of the main formula.
    pub in_displayed_range: bool,
    pub class_count: usize,
    pub kloos: Complex64,
    /// prefactor · kloos
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct KloosTerms {
    pub terms: Vec<KloosTerm>,
    pub budget: u64,
    /// (cell, s, d) triples inside the summation range whose class set is empty.
    pub empty: usize,
    /// Whether n·m₁₂/m₂₂ is a rational square, the condition for K_121.
    pub has_121: bool,
}

/// Positive rational square root, if any.
fn rational_sqrt(q: R) -> Option<R> {
    if *q.numer() <= 0 {
        return None;
    }
    let (a, b) = (*q.numer(), *q.denom());
    let (ra, rb) = (a.sqrt(), b.sqrt());
    (ra * ra == a && rb * rb == b).then(|| R::new(ra, rb))
}

pub fn geometric_sum_terms(
    n: u64,
    level: u64,
    m1: CharacterIndex,
    m2: CharacterIndex,
    omega: &DirichletChar,
    opts: &EnumOptions,
) -> Result<KloosTerms, KloosError> {
    if n == 0 || level == 0 || num_integer::gcd(n, level) != 1 {
        return Err(KloosError::InvalidSpec("n and N must be positive and coprime"));
    }
    let ni = n as i64;
    let big_n = level as i64;
    let budget = opts.budget as i64;
    // (cell, s, d, prefactor, d1, d2)
    let mut ranges: Vec<(CellTag, i64, i64, i64, R, R)> = Vec::new();

    // K_J: N | s, N² | k, s > 0, k of either sign.
    for s in (big_n..=budget).step_by(big_n as usize) {
        let kmax = budget / s;
        for k in (1..=kmax).filter(|k| k % (big_n * big_n) == 0) {
            for k in [k, -k] {
                ranges.push((CellTag::J, s, k, 1, R::new(k, s * s), R::new(ni, k)));
            }
        }
    }

    // K_121: s = Nk of either sign, d = b·s with b² = n·m₁₂/m₂₂. The displayed range also asks
    // N² | d, which does not follow from the congruence pattern; such terms are kept and flagged.
    let b = rational_sqrt(R::new(ni * m1.m2, m2.m2));
    if let Some(b) = b {
        for s in (big_n..=budget).step_by(big_n as usize) {
            for s in [s, -s] {
                let d = b * s;
                if !d.is_integer() {
                    continue;
                }
                let d = d.to_integer();
                if (s * d).abs() > budget {
                    continue;
                }
                ranges.push((CellTag::W121, s, d, m2.m2, R::from_integer(ni) / (b * s), b / s));
            }
        }
    }

    // K_212: s > 0 with m₂₁N | s·m₁₁ and m₂₁N² | s²·m₁₁.
    let ratio = R::new(m1.m1, m2.m1);
    let mut s = 1i64;
    loop {
        let sc = -ratio * s;
        let dc = -ratio * (s * s);
        let scale = (sc * dc).abs();
        if scale > R::from_integer(budget) {
            break;
        }
        let in_range = (sc / big_n).is_integer() && (dc / (big_n * big_n)).is_integer();
        if in_range {
            let d1 = -ratio;
            let d2 = -R::new(ni, s * s) / ratio;
            ranges.push((CellTag::W212, sc.to_integer(), dc.to_integer(), m2.m1, d1, d2));
        }
        s += 1;
    }

    let mut terms = Vec::new();
    let mut empty = 0;
    for (cell, s, d, pre, d1, d2) in ranges {
        let spec = KloostermanSpec::new(cell, level, s, d, ni, m1, m2).with_omega(omega.clone());
        let v = kloos(&spec, opts)?;
        if v.class_count == 0 {
            empty += 1;
            continue;
        }
        terms.push(KloosTerm {
            cell,
            s,
            d,
            m: ni,
            prefactor: pre,
            in_displayed_range: cell != CellTag::W121 || d % (big_n * big_n) == 0,
            d1,
            d2,
            class_count: v.class_count,
            kloos: v.value,
            value: v.value * pre as f64,
        });
    }
    Ok(KloosTerms { terms, budget: opts.budget, empty, has_121: b.is_some() })
}
