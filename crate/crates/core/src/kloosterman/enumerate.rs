//! Double-coset enumeration for the J, s₁s₂s₁ and s₂s₁s₂ cells.
//!
//! Every class has a representative u₁·w·t·u₂ with u₁ in the left canonical window and u₂ in
//! the right one. Integrality of g confines the coordinates to finite lattices; those lattices
//! are searched in three stages. Column 2 of g only sees u₁, column 1 sees u₁ and x₂, rows 3-4
//! see u₂ and x₁, and only the B block needs both sides.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use super::{Congruence, KloosError, KloostermanSpec};
use crate::exact_group::{
    bruhat::decompose, classify_cell, left_canonical, right_canonical, torus, u_matrix, CellDecomp, CellTag,
    ExactMatrix4, GSpElement, Root, UCoords, Q,
};
use crate::parallel::{self, Parallelism};

type Rq = Ratio<i128>;
type M4 = [[Rq; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Largest admissible |s·d|.
    pub budget: u64,
    /// Coordinate windows are [w, w+1) instead of [0, 1).
    pub window_offset: i64,
    pub parallelism: Parallelism,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: 64, window_offset: 0, parallelism: Parallelism::default() }
    }
}

/// Class invariants: x₁, c₁, x₂, c₂ mod 1 and a₂₂ mod N.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetInvariants {
    pub x1: Q,
    pub c1: Q,
    pub x2: Q,
    pub c2: Q,
    pub a22_mod_n: i64,
}

#[derive(Clone, Debug)]
pub struct CosetRep {
    pub g: GSpElement,
    /// Bruhat data with u₁, u₂ in the canonical [0,1) windows.
    pub bruhat: CellDecomp,
    pub invariants: CosetInvariants,
}

/// Roots generating the right quotient group: U for J, Ū_σ otherwise.
pub fn right_roots(cell: CellTag) -> &'static [Root] {
    match cell {
        CellTag::J => &[Root::X, Root::A, Root::B, Root::C],
        CellTag::W121 => &[Root::X, Root::A, Root::B],
        CellTag::W212 => &[Root::A, Root::B, Root::C],
    }
}

/// Torus (t₁, t₂, t₃) of the cell with parameters (s, d, m).
pub fn cell_torus(cell: CellTag, s: i64, d: i64, m: i64) -> (Q, Q, Q) {
    let z = |v: i64| Q::from_integer(BigInt::from(v));
    match cell {
        CellTag::J => (z(d) / z(s), z(s), z(m)),
        CellTag::W121 => (z(m) * z(s) / z(d), z(s), z(m)),
        CellTag::W212 => (z(s), z(d) / z(s), z(m)),
    }
}

/// Cell parameters (s, d, m) read off an element of the cell.
pub fn cell_parameters(cell: CellTag, g: &GSpElement) -> Option<(Q, Q, Q)> {
    let m = g.matrix();
    let (_, dd2, _) = crate::exact_group::minors(m);
    let detc = crate::exact_group::bruhat::c_block_det(m);
    match cell {
        CellTag::J => Some((-m.at(4, 2), detc, g.mu().clone())),
        CellTag::W121 => Some((-m.at(4, 2), dd2, g.mu().clone())),
        CellTag::W212 => Some((-m.at(4, 1), -detc, g.mu().clone())),
    }
}

/// Checks an exact element against the Γ₁(N)-type pattern mod N.
pub fn congruence_ok(g: &ExactMatrix4, level: u64, cong: Congruence) -> bool {
    if !g.is_integral() {
        return false;
    }
    let n = BigInt::from(level);
    (0..4).all(|i| {
        (0..4).all(|j| {
            let v = g.e[i][j].numer() % &n;
            entry_pattern_ok(i, j, &v, &n, cong)
        })
    })
}

fn entry_pattern_ok(i: usize, j: usize, v: &BigInt, n: &BigInt, cong: Congruence) -> bool {
    const ZEROS: [(usize, usize); 6] = [(0, 1), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];
    let r = v.mod_floor(n);
    if ZEROS.contains(&(i, j)) {
        return r.is_zero();
    }
    if (i, j) == (1, 1) {
        return match cong {
            Congruence::Gamma1 => r == BigInt::one().mod_floor(n),
            Congruence::CentralUnits => r.gcd(n).is_one(),
        };
    }
    true
}

fn entry_ok(i: usize, j: usize, v: &Rq, n: i128, cong: Congruence) -> bool {
    if !v.is_integer() {
        return false;
    }
    let r = v.to_integer().rem_euclid(n);
    match (i, j) {
        (0, 1) | (2, 0) | (2, 1) | (3, 0) | (3, 1) | (3, 2) => r == 0,
        (1, 1) => match cong {
            Congruence::Gamma1 => r == 1 % n,
            Congruence::CentralUnits => r.gcd(&n) == 1,
        },
        _ => true,
    }
}

fn zero4() -> M4 {
    std::array::from_fn(|_| std::array::from_fn(|_| Rq::zero()))
}

fn mul4(a: &M4, b: &M4) -> M4 {
    let mut out = zero4();
    for i in 0..4 {
        for k in 0..4 {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..4 {
                if !b[k][j].is_zero() {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// u(x,a,b,c) from coordinates [x, a, b, c].
fn u4(c: &[Rq; 4]) -> M4 {
    let [x, a, b, cc] = *c;
    let mut m = zero4();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rq::one();
    }
    m[0][2] = cc;
    m[0][3] = a - cc * x;
    m[1][0] = x;
    m[1][2] = a;
    m[1][3] = b;
    m[2][3] = -x;
    m
}

fn weyl_t4(cell: CellTag, t: (Rq, Rq, Rq)) -> M4 {
    let rows = cell.weyl().rows();
    let diag = [t.0, t.1, t.2 / t.0, t.2 / t.1];
    let mut m = zero4();
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = Rq::from_integer(rows[i][j] as i128) * diag[j];
        }
    }
    m
}

fn q_to_rq(v: &Q) -> Rq {
    Rq::new(v.numer().to_i128().expect("small"), v.denom().to_i128().expect("small"))
}

fn rq_to_q(v: &Rq) -> Q {
    Q::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

/// Points of base + (1/q)ℤ in [w, w+1).
fn lattice(base: Rq, q: i128, w: i128) -> impl Iterator<Item = Rq> {
    let q = q.abs();
    let k0 = ((Rq::from_integer(w) - base) * Rq::from_integer(q)).ceil().to_integer();
    (0..q).map(move |i| base + Rq::new(k0 + i, q))
}

/// Left coordinate candidates [x, a, b, c].
fn left_candidates(cell: CellTag, s: i128, d: i128, w: i128) -> Vec<[Rq; 4]> {
    // Steps for (x, c, a − cx, b − x(a − cx)).
    let (qx, qc, qa, qb) = match cell {
        CellTag::J | CellTag::W121 => (s, d, s, s * s),
        CellTag::W212 => (s, if d % s == 0 { d / s } else { d }, d, s * d),
    };
    let zero = Rq::zero();
    let mut out = Vec::new();
    for x in lattice(zero, qx, w) {
        for c in lattice(zero, qc, w) {
            for a in lattice(c * x, qa, w) {
                let s2 = a - c * x;
                for b in lattice(x * s2, qb, w) {
                    out.push([x, a, b, c]);
                }
            }
        }
    }
    out
}

/// Right coordinate candidates [x, a, b, c].
fn right_candidates(cell: CellTag, s: i128, d: i128, w: i128) -> Vec<[Rq; 4]> {
    let zero = Rq::zero();
    let mut out = Vec::new();
    match cell {
        CellTag::J => {
            for x in lattice(zero, s, w) {
                for c in lattice(zero, d, w) {
                    for a in lattice(zero, s, w) {
                        for b in lattice(-x * a, s * s, w) {
                            out.push([x, a, b, c]);
                        }
                    }
                }
            }
        }
        CellTag::W121 => {
            for x in lattice(zero, s, w) {
                for a in lattice(zero, s, w) {
                    for b in lattice(zero, s, w) {
                        out.push([x, a, b, zero]);
                    }
                }
            }
        }
        CellTag::W212 => {
            for c in lattice(zero, s, w) {
                for a in lattice(zero, s, w) {
                    for b in lattice(zero, d, w) {
                        out.push([zero, a, b, c]);
                    }
                }
            }
        }
    }
    out
}

struct Left {
    coords: [Rq; 4],
    /// u₁·w·t
    lw: M4,
}

struct Right {
    coords: [Rq; 4],
    u2: M4,
    /// w·t·u₂
    wr: M4,
}

/// All double cosets of the cell, canonicalised and deduplicated.
pub fn enumerate_cell(spec: &KloostermanSpec, opts: &EnumOptions) -> Result<Vec<CosetRep>, KloosError> {
    spec.validate()?;
    let scale = (spec.s as i128 * spec.d as i128).unsigned_abs();
    if scale > opts.budget as u128 {
        return Err(KloosError::UnsupportedScale { scale: scale as u64, budget: opts.budget });
    }
    let cell = spec.cell;
    let (s, d) = (spec.s as i128, spec.d as i128);
    let n = spec.level as i128;
    let cong = spec.congruence;
    let w = opts.window_offset as i128;
    let (t1, t2, t3) = cell_torus(cell, spec.s, spec.d, spec.m);
    let tq = (q_to_rq(&t1), q_to_rq(&t2), q_to_rq(&t3));
    let wt = weyl_t4(cell, tq);

    // Stage 1: column 2 for the left side, row 4 for the right side.
    let mut lefts: BTreeMap<Rq, Vec<Left>> = BTreeMap::new();
    for coords in left_candidates(cell, s, d, w) {
        let lw = mul4(&u4(&coords), &wt);
        if (0..4).all(|i| entry_ok(i, 1, &lw[i][1], n, cong)) {
            lefts.entry(coords[0]).or_default().push(Left { coords, lw });
        }
    }
    let mut rights: BTreeMap<Rq, Vec<Right>> = BTreeMap::new();
    for coords in right_candidates(cell, s, d, w) {
        let u2 = u4(&coords);
        let wr = mul4(&wt, &u2);
        if (0..4).all(|j| entry_ok(3, j, &wr[3][j], n, cong)) {
            rights.entry(coords[0]).or_default().push(Right { coords, u2, wr });
        }
    }

    let pairs: Vec<(&Rq, &Rq)> = lefts.keys().flat_map(|x1| rights.keys().map(move |x2| (x1, x2))).collect();
    let found: Vec<Vec<([Rq; 4], [Rq; 4])>> = parallel::map(opts.parallelism, &pairs, |&(x1, x2)| {
        // Stage 2: column 1 given x₂, row 3 given x₁.
        let ls: Vec<&Left> = lefts[x1]
            .iter()
            .filter(|l| (0..4).all(|i| entry_ok(i, 0, &(l.lw[i][0] + *x2 * l.lw[i][1]), n, cong)))
            .collect();
        if ls.is_empty() {
            return Vec::new();
        }
        let rs: Vec<&Right> = rights[x2]
            .iter()
            .filter(|r| (0..4).all(|j| entry_ok(2, j, &(r.wr[2][j] - *x1 * r.wr[3][j]), n, cong)))
            .collect();
        // Stage 3: the B block.
        let mut out = Vec::new();
        for l in &ls {
            for r in &rs {
                let ok = (0..2).all(|i| {
                    (2..4).all(|j| {
                        let v = (0..4).fold(Rq::zero(), |acc, k| acc + l.lw[i][k] * r.u2[k][j]);
                        entry_ok(i, j, &v, n, cong)
                    })
                });
                if ok {
                    out.push((l.coords, r.coords));
                }
            }
        }
        out
    });

    let t = (t1, t2, t3);
    let mut classes: BTreeMap<(UCoords, UCoords), CosetRep> = BTreeMap::new();
    for (lc, rc) in found.into_iter().flatten() {
        let to_u = |c: &[Rq; 4]| UCoords::new(rq_to_q(&c[0]), rq_to_q(&c[1]), rq_to_q(&c[2]), rq_to_q(&c[3]));
        let raw = CellDecomp { cell, u1: to_u(&lc), t: t.clone(), u2: to_u(&rc) };
        let rep = canonical_rep(spec, &raw.reconstruct()?)?;
        classes.entry((rep.bruhat.u1.clone(), rep.bruhat.u2.clone())).or_insert(rep);
    }
    Ok(classes.into_values().collect())
}

/// Canonical representative of the class of an element of Γ_cell(N, s, d, m), after checking
/// every defining condition exactly.
pub fn canonical_rep(spec: &KloostermanSpec, g: &GSpElement) -> Result<CosetRep, KloosError> {
    let mat = g.matrix();
    if !congruence_ok(mat, spec.level, spec.congruence) {
        return Err(KloosError::NotInCell("not integral or violates the congruence pattern"));
    }
    if classify_cell(mat) != Some(spec.cell) {
        return Err(KloosError::NotInCell("wrong Bruhat cell"));
    }
    let z = |v: i64| Q::from_integer(BigInt::from(v));
    let params = cell_parameters(spec.cell, g).expect("cell checked");
    if params != (z(spec.s), z(spec.d), z(spec.m)) {
        return Err(KloosError::NotInCell("cell parameters (s, d, m) differ"));
    }
    let dec = decompose(spec.cell, g)?;
    let u1 = left_canonical(&dec.u1);
    let u2 = right_canonical(&dec.u2, right_roots(spec.cell));
    let bruhat = CellDecomp { cell: spec.cell, u1, t: dec.t, u2 };
    let g = bruhat.reconstruct()?;
    debug_assert!(congruence_ok(g.matrix(), spec.level, spec.congruence));
    let a22 = g.matrix().at(2, 2).numer().mod_floor(&BigInt::from(spec.level));
    let frac = crate::exact_group::matrix::frac;
    let invariants = CosetInvariants {
        x1: frac(&bruhat.u1.x),
        c1: frac(&bruhat.u1.c),
        x2: frac(&bruhat.u2.x),
        c2: frac(&bruhat.u2.c),
        a22_mod_n: a22.to_i64().expect("reduced mod N"),
    };
    Ok(CosetRep { g, bruhat, invariants })
}

/// Random integral perturbation γ·g·γ' with γ ∈ U(ℤ), γ' in the right quotient group.
pub fn perturb(cell: CellTag, g: &GSpElement, left: [i64; 4], right: [i64; 4]) -> GSpElement {
    let z = |v: i64| Q::from_integer(BigInt::from(v));
    let l = UCoords::new(z(left[0]), z(left[1]), z(left[2]), z(left[3]));
    let roots = right_roots(cell);
    let pick = |r: Root, v: i64| if roots.contains(&r) { z(v) } else { Q::zero() };
    let r = UCoords::new(pick(Root::X, right[0]), pick(Root::A, right[1]), pick(Root::B, right[2]), pick(Root::C, right[3]));
    u_matrix(&l).mul(g).mul(&u_matrix(&r))
}

pub fn torus_element(cell: CellTag, s: i64, d: i64, m: i64) -> Result<GSpElement, KloosError> {
    let (t1, t2, t3) = cell_torus(cell, s, d, m);
    Ok(torus(&t1, &t2, &t3)?)
}
