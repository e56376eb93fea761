use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::{qi, ExactMatrix4};
use super::{GroupError, Q};

/// Multiplier μ with ᵗgJg = μJ, or an error if g is not a similitude of J.
pub fn multiplier(g: &ExactMatrix4) -> Result<Q, GroupError> {
    let j = ExactMatrix4::j_form();
    let lhs = &(&g.transpose() * &j) * g;
    // ᵗgJg = μJ means the (1,3) entry is μ.
    let mu = lhs.e[0][2].clone();
    if mu.is_zero() || lhs != j.scale(&mu) {
        return Err(GroupError::NotSymplectic);
    }
    Ok(mu)
}

/// Validated element of GSp₄(ℚ) with its cached multiplier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GSpElement {
    m: ExactMatrix4,
    mu: Q,
}

impl GSpElement {
    pub fn new(m: ExactMatrix4) -> Result<Self, GroupError> {
        let mu = multiplier(&m)?;
        Ok(GSpElement { m, mu })
    }

    pub(crate) fn new_unchecked(m: ExactMatrix4, mu: Q) -> Self {
        debug_assert_eq!(multiplier(&m).ok(), Some(mu.clone()));
        GSpElement { m, mu }
    }

    pub fn identity() -> Self {
        GSpElement { m: ExactMatrix4::identity(), mu: Q::one() }
    }

    pub fn matrix(&self) -> &ExactMatrix4 {
        &self.m
    }

    pub fn mu(&self) -> &Q {
        &self.mu
    }

    pub fn mul(&self, other: &GSpElement) -> GSpElement {
        GSpElement { m: &self.m * &other.m, mu: &self.mu * &other.mu }
    }

    /// g⁻¹ = μ⁻¹·J⁻¹·ᵗg·J.
    pub fn inverse(&self) -> GSpElement {
        let j = ExactMatrix4::j_form();
        let jinv = -&j;
        let inv = (&(&jinv * &self.m.transpose()) * &j).scale(&(Q::one() / &self.mu));
        GSpElement { m: inv, mu: Q::one() / &self.mu }
    }

    pub fn conj_by(&self, h: &GSpElement) -> GSpElement {
        // h⁻¹ · self · h
        h.inverse().mul(self).mul(h)
    }
}

/// δ₁ = diag(d₁, 1, d₂, d₁d₂), a representative of T(ℚ)/Z(ℚ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusRep {
    pub d1: Q,
    pub d2: Q,
}

impl TorusRep {
    pub fn new(d1: Q, d2: Q) -> Result<Self, GroupError> {
        if d1.is_zero() || d2.is_zero() {
            return Err(GroupError::Degenerate("torus entries must be nonzero"));
        }
        Ok(TorusRep { d1, d2 })
    }

    pub fn element(&self) -> GSpElement {
        let prod = &self.d1 * &self.d2;
        GSpElement {
            m: ExactMatrix4::diag([self.d1.clone(), Q::one(), self.d2.clone(), prod.clone()]),
            mu: prod,
        }
    }
}

/// Generic character index 𝐦 = (m₁, m₂) with both entries nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct CharacterIndex {
    pub m1: i64,
    pub m2: i64,
}

impl CharacterIndex {
    pub fn new(m1: i64, m2: i64) -> Result<Self, GroupError> {
        if m1 == 0 || m2 == 0 {
            return Err(GroupError::Degenerate("character index must be generic (m1, m2 nonzero)"));
        }
        Ok(CharacterIndex { m1, m2 })
    }

    pub fn one() -> Self {
        CharacterIndex { m1: 1, m2: 1 }
    }
}

/// t_𝐦 = diag(m₁, 1, m₁m₂, m₁²m₂).
pub fn t_m(m: CharacterIndex) -> GSpElement {
    let m1 = BigInt::from(m.m1);
    let m2 = BigInt::from(m.m2);
    let d = [
        Q::from_integer(m1.clone()),
        Q::one(),
        Q::from_integer(&m1 * &m2),
        Q::from_integer(&m1 * &m1 * &m2),
    ];
    GSpElement { m: ExactMatrix4::diag(d), mu: Q::from_integer(&m1 * &m1 * &m2) }
}

/// diag(t₁, t₂, t₃/t₁, t₃/t₂).
pub fn torus(t1: &Q, t2: &Q, t3: &Q) -> Result<GSpElement, GroupError> {
    if t1.is_zero() || t2.is_zero() || t3.is_zero() {
        return Err(GroupError::Degenerate("torus entries must be nonzero"));
    }
    Ok(GSpElement {
        m: ExactMatrix4::diag([t1.clone(), t2.clone(), t3 / t1, t3 / t2]),
        mu: t3.clone(),
    })
}

pub fn scalar(z: i64) -> GSpElement {
    GSpElement { m: ExactMatrix4::identity().scale(&qi(z)), mu: qi(z * z) }
}
