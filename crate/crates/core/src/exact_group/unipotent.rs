use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::gsp::{CharacterIndex, GSpElement};
use super::matrix::{frac, ExactMatrix4};
use super::{GroupError, Q};

/// Coordinates of u(x,a,b,c): x on the root e₂−e₁, c on 2e₁, a on e₁+e₂, b on 2e₂.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UCoords {
    pub x: Q,
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

/// One of the four root subgroups of U.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Root {
    X,
    A,
    B,
    C,
}

impl Root {
    pub const ALL: [Root; 4] = [Root::X, Root::A, Root::B, Root::C];
}

impl UCoords {
    pub fn new(x: Q, a: Q, b: Q, c: Q) -> Self {
        UCoords { x, a, b, c }
    }

    pub fn zero() -> Self {
        UCoords::new(Q::zero(), Q::zero(), Q::zero(), Q::zero())
    }

    pub fn root(r: Root, t: Q) -> Self {
        let mut u = UCoords::zero();
        match r {
            Root::X => u.x = t,
            Root::A => u.a = t,
            Root::B => u.b = t,
            Root::C => u.c = t,
        }
        u
    }

    pub fn get(&self, r: Root) -> &Q {
        match r {
            Root::X => &self.x,
            Root::A => &self.a,
            Root::B => &self.b,
            Root::C => &self.c,
        }
    }

    pub fn to_f64(&self) -> [f64; 4] {
        use super::matrix::q_to_f64;
        [q_to_f64(&self.x), q_to_f64(&self.a), q_to_f64(&self.b), q_to_f64(&self.c)]
    }
}

pub fn u_raw(u: &UCoords) -> ExactMatrix4 {
    let mut m = ExactMatrix4::identity();
    m.e[0][2] = u.c.clone();
    m.e[0][3] = &u.a - &u.c * &u.x;
    m.e[1][0] = u.x.clone();
    m.e[1][2] = u.a.clone();
    m.e[1][3] = u.b.clone();
    m.e[2][3] = -u.x.clone();
    m
}

pub fn u_matrix(u: &UCoords) -> GSpElement {
    GSpElement::new_unchecked(u_raw(u), Q::one())
}

/// Inverse of u_matrix; fails unless g has exactly the shape of some u(x,a,b,c).
pub fn u_coords(g: &ExactMatrix4) -> Result<UCoords, GroupError> {
    let u = UCoords::new(g.e[1][0].clone(), g.e[1][2].clone(), g.e[1][3].clone(), g.e[0][2].clone());
    if &u_raw(&u) == g {
        Ok(u)
    } else {
        Err(GroupError::NotInU)
    }
}

/// Fractional part of m₁x + m₂c; the character value is e(·).
pub fn psi_exponent(m: CharacterIndex, u: &UCoords) -> Q {
    frac(&psi_linear(m, u))
}

/// m₁x + m₂c before reduction mod 1.
pub fn psi_linear(m: CharacterIndex, u: &UCoords) -> Q {
    &u.x * Q::from_integer(BigInt::from(m.m1)) + &u.c * Q::from_integer(BigInt::from(m.m2))
}

fn int_root(r: Root, k: &Q) -> ExactMatrix4 {
    u_raw(&UCoords::root(r, k.clone()))
}

fn floor_neg(v: &Q) -> Q {
    -v.floor()
}

/// Canonical representative of the coset U(ℤ)·u: x, c, a, b brought into [0,1) in that order
/// by left multiplication with integral root elements.
pub fn left_canonical(u: &UCoords) -> UCoords {
    let mut m = u_raw(u);
    for r in [Root::X, Root::C, Root::A, Root::B] {
        let cur = u_coords(&m).expect("stays in U");
        let k = floor_neg(cur.get(r));
        if !k.is_zero() {
            m = &int_root(r, &k) * &m;
        }
    }
    let out = u_coords(&m).expect("stays in U");
    debug_assert!(in_unit_box(&out, &[Root::X, Root::A, Root::B, Root::C]));
    out
}

/// Canonical representative of u·V(ℤ) where V is the subgroup generated by the given roots
/// (all four for U, {x, a, b} for the s₁s₂s₁ complement, {a, b, c} for the s₂s₁s₂ one).
/// Roots are reduced in the order x, c, a, b.
pub fn right_canonical(u: &UCoords, roots: &[Root]) -> UCoords {
    let mut m = u_raw(u);
    for r in [Root::X, Root::C, Root::A, Root::B] {
        if !roots.contains(&r) {
            continue;
        }
        let cur = u_coords(&m).expect("stays in U");
        let k = floor_neg(cur.get(r));
        if !k.is_zero() {
            m = &m * &int_root(r, &k);
        }
    }
    let out = u_coords(&m).expect("stays in U");
    debug_assert!(in_unit_box(&out, roots));
    out
}

pub fn in_unit_box(u: &UCoords, roots: &[Root]) -> bool {
    roots.iter().all(|r| {
        let v = u.get(*r);
        *v >= Q::zero() && *v < Q::one()
    })
}

/// Levi part n(x) = diag(A, A⁻ᵀ) with A = [[1,0],[x,1]].
pub fn levi_n(x: &Q) -> ExactMatrix4 {
    u_raw(&UCoords::new(x.clone(), Q::zero(), Q::zero(), Q::zero()))
}

/// Siegel element s(σ) = [[I, S], [0, I]] with S = [[σ₁, σ₂], [σ₂, σ₃]].
pub fn siegel(s1: &Q, s2: &Q, s3: &Q) -> ExactMatrix4 {
    let mut m = ExactMatrix4::identity();
    m.e[0][2] = s1.clone();
    m.e[0][3] = s2.clone();
    m.e[1][2] = s2.clone();
    m.e[1][3] = s3.clone();
    m
}

/// u = n(x)·s(σ) with σ = (c, a−cx, b−x(a−cx)).
pub fn left_siegel_coords(u: &UCoords) -> [Q; 3] {
    let s2 = &u.a - &u.c * &u.x;
    let s3 = &u.b - &u.x * &s2;
    [u.c.clone(), s2, s3]
}

pub fn from_left_siegel(x: &Q, s: &[Q; 3]) -> UCoords {
    let a = &s[1] + &s[0] * x;
    let b = &s[2] + x * &s[1];
    UCoords::new(x.clone(), a, b, s[0].clone())
}

/// u = s(σ')·n(x) with σ' = (c, a, b+xa).
pub fn right_siegel_coords(u: &UCoords) -> [Q; 3] {
    [u.c.clone(), u.a.clone(), &u.b + &u.x * &u.a]
}

pub fn from_right_siegel(x: &Q, s: &[Q; 3]) -> UCoords {
    let b = &s[2] - x * &s[1];
    UCoords::new(x.clone(), s[1].clone(), b, s[0].clone())
}
