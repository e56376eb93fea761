use num_bigint::BigInt;
use num_traits::One;

use super::gsp::{CharacterIndex, GSpElement, TorusRep};
use super::matrix::qi;
use super::unipotent::{psi_linear, u_coords, u_matrix, Root, UCoords};
use super::weyl::{WeylElem, WeylTag};
use super::Q;

/// σ⁻¹uσ ∈ U ?
pub fn u_sigma_member(sigma: WeylTag, u: &UCoords) -> bool {
    let w = WeylElem::new(sigma);
    let conj = u_matrix(u).conj_by(&w.element);
    u_coords(conj.matrix()).is_ok()
}

/// Relevance of the orbit of δ_σ = σδ₁ for the pair (ψ_{m₁}, ψ_{m₂}), by the closed-form
/// conditions on (d₁, d₂).
pub fn relevant_orbit(sigma: WeylTag, delta: &TorusRep, m1: CharacterIndex, m2: CharacterIndex) -> bool {
    let z = |v: i64| Q::from_integer(BigInt::from(v));
    match sigma {
        WeylTag::Id => {
            delta.d1 == z(m1.m1) / z(m2.m1) && delta.d2 == z(m1.m1) * z(m1.m2) / (z(m2.m1) * z(m2.m2))
        }
        WeylTag::S1S2S1 => &delta.d1 * z(m1.m2) == &delta.d2 * z(m2.m2),
        WeylTag::S2S1S2 => z(m1.m1) == -(&delta.d1 * z(m2.m1)),
        WeylTag::J => true,
        _ => false,
    }
}

/// Independent check of relevance from the definition: on every root subgroup X ⊂ U_σ,
/// the linear forms u ↦ m₁·(x,c)(u) and u ↦ m₂·(x,c)(δ_σ⁻¹uδ_σ) must coincide.
pub fn relevant_check_by_conjugation(
    sigma: WeylTag,
    delta: &TorusRep,
    m1: CharacterIndex,
    m2: CharacterIndex,
) -> bool {
    let w = WeylElem::new(sigma);
    let ds: GSpElement = w.element.mul(&delta.element());
    Root::ALL.into_iter().all(|r| {
        // Two sample points pin down a linear form on a one-parameter subgroup.
        [Q::one(), qi(3) / qi(7)].into_iter().all(|t| {
            let u = UCoords::root(r, t);
            if !u_sigma_member(sigma, &u) {
                return true;
            }
            let conj = u_matrix(&u).conj_by(&ds);
            let v = u_coords(conj.matrix()).expect("δ_σ⁻¹uδ_σ ∈ U for u ∈ U_σ");
            psi_linear(m1, &u) == psi_linear(m2, &v)
        })
    })
}
