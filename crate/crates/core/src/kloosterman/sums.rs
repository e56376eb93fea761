use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::enumerate::{enumerate_cell, CosetRep, EnumOptions};
use super::{KloosError, KloostermanSpec};
use crate::exact_group::matrix::{frac, q_to_f64};
use crate::exact_group::{minors, CellTag, ExactMatrix4, Q};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct KloosValue {
    pub cell: CellTag,
    pub level: u64,
    pub s: i64,
    pub d: i64,
    pub m: i64,
    pub class_count: usize,
    pub value: Complex64,
}

/// Exponent of the additive character in the summand, read off the matrix entries.
///   J:   (m₁₁c₁₂ + m₂₁c₂₁)/s + (m₁₂·det Δ₁ + m₂₂·det Δ₂)/d
///   121: (m₁₁c₁₂ + m₂₁c₂₁)/s + m₁₂·det Δ₃/d
///   212: (m₁₁c₁₁ + m₂₂d₂₁)/s − m₁₂·det Δ₁/d
pub fn summand_phase(spec: &KloostermanSpec, g: &ExactMatrix4) -> Q {
    let z = |v: i64| Q::from_integer(BigInt::from(v));
    let (m11, m12, m21, m22) = (z(spec.m1.m1), z(spec.m1.m2), z(spec.m2.m1), z(spec.m2.m2));
    let (s, d) = (z(spec.s), z(spec.d));
    let (dd1, dd2, dd3) = minors(g);
    let c11 = g.at(3, 1);
    let c12 = g.at(3, 2);
    let c21 = g.at(4, 1);
    let d21 = g.at(4, 3);
    match spec.cell {
        CellTag::J => (&m11 * c12 + &m21 * c21) / &s + (&m12 * dd1 + &m22 * dd2) / &d,
        CellTag::W121 => (&m11 * c12 + &m21 * c21) / &s + &m12 * dd3 / &d,
        CellTag::W212 => (&m11 * c11 + &m22 * d21) / &s - &m12 * dd1 / &d,
    }
}

/// ω̄_N(a₂₂)·e(phase).
pub fn summand(spec: &KloostermanSpec, g: &ExactMatrix4) -> Complex64 {
    let phase = q_to_f64(&frac(&summand_phase(spec, g)));
    let a22 = g.at(2, 2).numer() % BigInt::from(spec.level);
    let chi = spec.omega.eval_conj(a22.to_i64().expect("reduced"));
    chi * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase)
}

pub fn sum_over(spec: &KloostermanSpec, reps: &[CosetRep]) -> Complex64 {
    reps.iter().map(|r| summand(spec, r.g.matrix())).sum()
}

pub fn kloos(spec: &KloostermanSpec, opts: &EnumOptions) -> Result<KloosValue, KloosError> {
    let reps = enumerate_cell(spec, opts)?;
    Ok(KloosValue {
        cell: spec.cell,
        level: spec.level,
        s: spec.s,
        d: spec.d,
        m: spec.m,
        class_count: reps.len(),
        value: sum_over(spec, &reps),
    })
}

fn require(spec: &KloostermanSpec, cell: CellTag) -> Result<(), KloosError> {
    if spec.cell != cell {
        return Err(KloosError::InvalidSpec("spec names a different cell"));
    }
    Ok(())
}

pub fn kloos_j(spec: &KloostermanSpec, opts: &EnumOptions) -> Result<KloosValue, KloosError> {
    require(spec, CellTag::J)?;
    kloos(spec, opts)
}

pub fn kloos_121(spec: &KloostermanSpec, opts: &EnumOptions) -> Result<KloosValue, KloosError> {
    require(spec, CellTag::W121)?;
    kloos(spec, opts)
}

pub fn kloos_212(spec: &KloostermanSpec, opts: &EnumOptions) -> Result<KloosValue, KloosError> {
    require(spec, CellTag::W212)?;
    kloos(spec, opts)
}

/// J-cell summand phase from Bruhat coordinates: m₁₁x₁ + m₁₂c₁ − m₂₁x₂ − m₂₂c₂.
pub fn j_phase_from_coords(spec: &KloostermanSpec, rep: &CosetRep) -> Q {
    let z = |v: i64| Q::from_integer(BigInt::from(v));
    let (u1, u2) = (&rep.bruhat.u1, &rep.bruhat.u2);
    z(spec.m1.m1) * &u1.x + z(spec.m1.m2) * &u1.c - z(spec.m2.m1) * &u2.x - z(spec.m2.m2) * &u2.c
}

