use std::collections::{BTreeMap, BTreeSet};

use gsp4_core::arith_sums::DirichletChar;
use gsp4_core::exact_group::*;
use gsp4_core::kloosterman::enumerate::{cell_parameters, congruence_ok};
use gsp4_core::kloosterman::sums::j_phase_from_coords;
use gsp4_core::kloosterman::*;
use gsp4_core::Parallelism;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ci(a: i64, b: i64) -> CharacterIndex {
    CharacterIndex::new(a, b).unwrap()
}

fn opts() -> EnumOptions {
    EnumOptions { budget: 200, ..EnumOptions::default() }
}

fn spec(cell: CellTag, n: u64, s: i64, d: i64, m: i64) -> KloostermanSpec {
    KloostermanSpec::new(cell, n, s, d, m, ci(1, 1), ci(1, 1))
}

fn class_key(r: &CosetRep) -> (UCoords, UCoords) {
    (r.bruhat.u1.clone(), r.bruhat.u2.clone())
}

#[test]
fn unit_long_cell() {
    let reps = enumerate_cell(&spec(CellTag::J, 1, 1, 1, 1), &opts()).unwrap();
    assert_eq!(reps.len(), 1);
    let j = WeylElem::new(WeylTag::J);
    assert_eq!(reps[0].g.matrix(), j.matrix());
    for m1 in [ci(1, 1), ci(2, -3)] {
        let sp = KloostermanSpec::new(CellTag::J, 1, 1, 1, 1, m1, ci(5, 7));
        let v = kloos_j(&sp, &opts()).unwrap();
        assert_eq!(v.class_count, 1);
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn empty_cells() {
    assert!(enumerate_cell(&spec(CellTag::J, 2, 1, 1, 1), &opts()).unwrap().is_empty());
    assert!(enumerate_cell(&spec(CellTag::W121, 2, 1, 1, 1), &opts()).unwrap().is_empty());
    let v = kloos_212(&spec(CellTag::W212, 3, 1, 1, 1), &opts()).unwrap();
    assert_eq!((v.class_count, v.value), (0, Complex64::new(0.0, 0.0)));
}

#[test]
fn budget_guard() {
    let o = EnumOptions { budget: 4, ..EnumOptions::default() };
    assert!(matches!(enumerate_cell(&spec(CellTag::J, 1, 2, 4, 1), &o), Err(KloosError::UnsupportedScale { .. })));
    assert!(kloos_121(&spec(CellTag::J, 1, 1, 1, 1), &opts()).is_err());
}


fn zq(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn rand_u(rng: &mut ChaCha8Rng, scale: i64) -> UCoords {
    let mut r = || zq(scale * rng.gen_range(-2i64..=2));
    UCoords::new(r(), r(), r(), r())
}

/// Random integral element of the congruence monoid with multiplier m: products of integral
/// upper unipotents, lower unipotents divisible by N, diag(1,1,m,m), and (for N = 1) Weyl
/// elements.
fn random_word(rng: &mut ChaCha8Rng, level: i64, m: i64) -> GSpElement {
    let mut g = GSpElement::identity();
    let len = rng.gen_range(3..8);
    let scale_pos = rng.gen_range(0..len);
    for i in 0..len {
        let h = match rng.gen_range(0..4) {
            0 => u_matrix(&rand_u(rng, 1)),
            1 | 2 => {
                let u = u_matrix(&rand_u(rng, level));
                GSpElement::new(u.matrix().transpose()).unwrap()
            }
            _ if level == 1 => WeylElem::new([WeylTag::J, WeylTag::S1, WeylTag::S2][rng.gen_range(0..3)]).element,
            _ => u_matrix(&rand_u(rng, 1)),
        };
        g = g.mul(&h);
        if i == scale_pos {
            g = g.mul(&torus(&zq(1), &zq(1), &zq(m)).unwrap());
        }
    }
    g
}

#[test]
fn completeness_against_random_integral_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cache: BTreeMap<(CellTag, u64, i64, i64, i64), BTreeSet<(UCoords, UCoords)>> = BTreeMap::new();
    let mut hits: BTreeMap<CellTag, usize> = BTreeMap::new();
    let o = EnumOptions { budget: 48, ..EnumOptions::default() };
    for _ in 0..4000 {
        let level = [1i64, 1, 2, 3][rng.gen_range(0..4)];
        let m = [1i64, -1, 2, 3][rng.gen_range(0..4)];
        let g = random_word(&mut rng, level, m);
        assert!(congruence_ok(g.matrix(), level as u64, Congruence::Gamma1));
        let Some(cell) = classify_cell(g.matrix()) else { continue };
        let (s, d, mu) = cell_parameters(cell, &g).unwrap();
        let (s, d, mu) = (s.to_integer().to_i64().unwrap(), d.to_integer().to_i64().unwrap(), mu.to_integer().to_i64().unwrap());
        if (s * d).unsigned_abs() > o.budget {
            continue;
        }
        let sp = spec(cell, level as u64, s, d, mu);
        let rep = canonical_rep(&sp, &g).unwrap();
        let classes = cache.entry((cell, level as u64, s, d, mu)).or_insert_with(|| {
            enumerate_cell(&sp, &o).unwrap().iter().map(class_key).collect()
        });
        assert!(classes.contains(&class_key(&rep)), "{cell:?} N={level} s={s} d={d} m={mu}: class missing");
        *hits.entry(cell).or_default() += 1;
    }
    println!("hits per cell: {hits:?}");
    for cell in CellTag::ALL {
        assert!(hits.get(&cell).copied().unwrap_or(0) > 20, "too few samples in {cell:?}");
    }
}

fn small_specs() -> Vec<KloostermanSpec> {
    let mut out = Vec::new();
    for level in [1u64, 2, 3] {
        for cell in CellTag::ALL {
            for s in -12i64..=12 {
                for d in -12i64..=12 {
                    if s == 0 || d == 0 || (s * d).abs() > 12 {
                        continue;
                    }
                    for m in [1i64, 2] {
                        out.push(KloostermanSpec::new(cell, level, s, d, m, ci(2, -1), ci(1, 3)));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn well_defined_and_window_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shifted = EnumOptions { window_offset: 1, ..opts() };
    let mut nonempty = 0;
    for sp in small_specs() {
        let reps = enumerate_cell(&sp, &opts()).unwrap();
        let again = enumerate_cell(&sp, &shifted).unwrap();
        let a: Vec<_> = reps.iter().map(class_key).collect();
        let b: Vec<_> = again.iter().map(class_key).collect();
        assert_eq!(a, b, "window shift changed the classes for {sp:?}");
        let seq = enumerate_cell(&sp, &EnumOptions { parallelism: Parallelism::Sequential, ..opts() }).unwrap();
        assert_eq!(a, seq.iter().map(class_key).collect::<Vec<_>>());
        nonempty += usize::from(!reps.is_empty());
        for r in &reps {
            let base = summand(&sp, r.g.matrix());
            let phase = matrix::frac(&summand_phase(&sp, r.g.matrix()));
            assert_eq!(canonical_rep(&sp, &r.g).unwrap().bruhat, r.bruhat, "canonicalisation not idempotent");
            for _ in 0..5 {
                let mut v = || [0; 4].map(|_: i32| rng.gen_range(-3i64..=3));
                let h = perturb(sp.cell, &r.g, v(), v());
                assert_eq!(matrix::frac(&summand_phase(&sp, h.matrix())), phase);
                assert!((summand(&sp, h.matrix()) - base).norm() <= 1e-12);
                assert_eq!(class_key(&canonical_rep(&sp, &h).unwrap()), class_key(r));
            }
        }
        // Emptiness patterns: N | s always; N² | d for J and 212, where C ≡ 0 mod N.
        if !reps.is_empty() {
            let n = sp.level as i64;
            assert_eq!(sp.s % n, 0, "{sp:?}");
            if sp.cell != CellTag::W121 {
                assert_eq!(sp.d % (n * n), 0, "{sp:?}");
            }
        }
    }
    assert!(nonempty > 50);
}

#[test]
fn long_cell_coordinates_match_entries() {
    for s in 1i64..=4 {
        for d in [-6i64, -3, 1, 2, 4, 6] {
            let sp = KloostermanSpec::new(CellTag::J, 1, s, d, 1, ci(3, -2), ci(1, 5));
            let reps = enumerate_cell(&sp, &opts()).unwrap();
            for r in &reps {
                assert_eq!(matrix::frac(&summand_phase(&sp, r.g.matrix())), matrix::frac(&j_phase_from_coords(&sp, r)));
            }
        }
    }
}

fn invariant_collisions(sp: &KloostermanSpec) -> usize {
    let reps = enumerate_cell(sp, &opts()).unwrap();
    let keys: BTreeSet<_> = reps
        .iter()
        .map(|r| {
            let i = &r.invariants;
            (i.x1.clone(), i.c1.clone(), i.x2.clone(), i.c2.clone())
        })
        .collect();
    reps.len() - keys.len()
}

// The class ↦ (x₁, c₁, x₂, c₂) mod 1 map is injective at prime d with s = 1, but not in
// general: at s = 3, d = −6 two classes differ only in b₁, b₂ (1/3 versus 2/3).
#[test]
fn long_cell_invariant_map() {
    for d in [2i64, 3, 5, 7, 11, -13] {
        assert_eq!(invariant_collisions(&spec(CellTag::J, 1, 1, d, 1)), 0);
    }
    assert!(invariant_collisions(&spec(CellTag::J, 1, 3, -6, 1)) > 0);
    let sp = spec(CellTag::J, 1, 3, -6, 1);
    let reps = enumerate_cell(&sp, &opts()).unwrap();
    let a = reps.iter().find(|r| r.g.matrix() == &ExactMatrix4::from_ints([[1, 0, 0, 0], [0, -1, 0, 0], [2, 0, 1, 0], [0, -3, 0, -1]]));
    let b = reps.iter().find(|r| r.g.matrix() == &ExactMatrix4::from_ints([[1, 0, 0, 0], [0, -2, 0, -1], [2, 0, 1, 0], [0, -3, 0, -2]]));
    let (a, b) = (a.unwrap(), b.unwrap());
    assert_ne!(class_key(a), class_key(b));
    assert_eq!(a.invariants, CosetInvariants { a22_mod_n: 0, ..b.invariants.clone() });
}

// Γ₁(2) contains an element of the s₁s₂s₁ cell with c₂₂ = 6 and det Δ₂ = −2, so N² ∤ d there.
#[test]
fn cell_121_square_pattern_fails() {
    let g = GSpElement::new(ExactMatrix4::from_ints([[3, 0, 0, 2], [1, 3, 2, 2], [0, -2, -1, -1], [0, 6, 4, 3]])).unwrap();
    let sp = spec(CellTag::W121, 2, -6, -2, 1);
    let rep = canonical_rep(&sp, &g).unwrap();
    assert!(enumerate_cell(&sp, &opts()).unwrap().iter().any(|r| class_key(r) == class_key(&rep)));
}

#[test]
fn central_units_twist() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let chi = DirichletChar::prime_power_of_generator(5, 1).unwrap();
    let mut seen_units = BTreeSet::new();
    for (cell, s, d) in [(CellTag::J, 5, 25), (CellTag::J, 5, -25), (CellTag::W212, 5, 25), (CellTag::W121, 5, 25)] {
        let sp = KloostermanSpec::new(cell, 5, s, d, 1, ci(1, 1), ci(1, 1))
            .with_omega(chi.clone())
            .with_congruence(Congruence::CentralUnits);
        let o = EnumOptions { budget: 200, ..EnumOptions::default() };
        for r in enumerate_cell(&sp, &o).unwrap() {
            seen_units.insert(r.invariants.a22_mod_n);
            for _ in 0..5 {
                let mut v = || [0; 4].map(|_: i32| rng.gen_range(-3i64..=3));
                let h = perturb(cell, &r.g, v(), v());
                assert_eq!(canonical_rep(&sp, &h).unwrap().invariants.a22_mod_n, r.invariants.a22_mod_n);
            }
        }
    }
    println!("a22 residues seen: {seen_units:?}");
    assert!(seen_units.len() > 1);
}

#[test]
fn geometric_terms_ranges() {
    let one = DirichletChar::trivial(1);
    let o = EnumOptions { budget: 16, ..EnumOptions::default() };
    let t = geometric_sum_terms(1, 1, ci(1, 1), ci(1, 1), &one, &o).unwrap();
    assert!(t.has_121);
    assert!(t.terms.iter().any(|x| x.cell == CellTag::J && x.s == 1 && x.d == 1));
    let two = DirichletChar::trivial(2);
    let t2 = geometric_sum_terms(1, 2, ci(1, 1), ci(1, 1), &two, &EnumOptions { budget: 32, ..o }).unwrap();
    for x in t2.terms.iter().filter(|x| x.cell == CellTag::J) {
        assert!(x.s % 2 == 0 && x.d % 4 == 0);
    }
    let t3 = geometric_sum_terms(2, 1, ci(1, 1), ci(1, 1), &one, &o).unwrap();
    assert!(!t3.has_121);
    assert!(t3.terms.iter().all(|x| x.cell != CellTag::W121));
    assert!(geometric_sum_terms(2, 2, ci(1, 1), ci(1, 1), &two, &o).is_err());
}

