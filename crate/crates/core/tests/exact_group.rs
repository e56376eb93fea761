use gsp4_core::exact_group::bruhat::{decompose, CellDecomp};
use gsp4_core::exact_group::unipotent::{
    from_left_siegel, from_right_siegel, left_siegel_coords, levi_n, right_siegel_coords, siegel, u_raw,
};
use gsp4_core::exact_group::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Q> {
    (-24i64..=24, 1i64..=7).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Q> {
    rat().prop_filter("nonzero", |x| !x.is_zero())
}

fn ucoords() -> impl Strategy<Value = UCoords> {
    (rat(), rat(), rat(), rat()).prop_map(|(x, a, b, c)| UCoords::new(x, a, b, c))
}

fn int_ucoords() -> impl Strategy<Value = UCoords> {
    (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5).prop_map(|(x, a, b, c)| UCoords::new(qi(x), qi(a), qi(b), qi(c)))
}

fn char_index() -> impl Strategy<Value = CharacterIndex> {
    let nz = prop_oneof![-6i64..=-1, 1i64..=6];
    (nz.clone(), nz).prop_map(|(a, b)| CharacterIndex::new(a, b).unwrap())
}

#[test]
fn multiplier_examples() {
    assert_eq!(multiplier(&ExactMatrix4::j_form()).unwrap(), qi(1));
    let d = TorusRep::new(q(3, 2), qi(-5)).unwrap();
    assert_eq!(multiplier(d.element().matrix()).unwrap(), q(-15, 2));
    let bad = ExactMatrix4::diag([qi(1), qi(2), qi(3), qi(4)]);
    assert_eq!(multiplier(&bad), Err(GroupError::NotSymplectic));
}

#[test]
fn u_matrix_shapes() {
    assert_eq!(u_matrix(&UCoords::zero()).matrix(), &ExactMatrix4::identity());
    let m = u_raw(&UCoords::new(qi(1), qi(0), qi(0), qi(0)));
    let expect = ExactMatrix4::from_ints([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]]);
    assert_eq!(m, expect);
    let lower = ExactMatrix4::from_ints([[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1]]);
    assert_eq!(u_coords(&lower), Err(GroupError::NotInU));
    assert_eq!(u_coords(&ExactMatrix4::identity()).unwrap(), UCoords::zero());
}

#[test]
fn t_m_examples() {
    let t = t_m(CharacterIndex::new(2, 3).unwrap());
    assert_eq!(t.matrix(), &ExactMatrix4::diag([qi(2), qi(1), qi(6), qi(12)]));
    assert_eq!(multiplier(t.matrix()).unwrap(), qi(12));
    assert_eq!(t_m(CharacterIndex::one()).matrix(), &ExactMatrix4::identity());
    assert!(CharacterIndex::new(0, 1).is_err());
}

#[test]
fn psi_exponent_examples() {
    let m = CharacterIndex::new(1, 2).unwrap();
    let u = UCoords::new(q(1, 3), qi(7), qi(5), q(1, 4));
    assert_eq!(psi_exponent(m, &u), q(5, 6));
    let u = UCoords::new(qi(0), q(2, 3), q(5, 7), qi(0));
    assert_eq!(psi_exponent(CharacterIndex::one(), &u), qi(0));
}

#[test]
fn weyl_group_structure() {
    let w = |t| WeylElem::new(t).element;
    let s1s2 = w(WeylTag::S1).mul(&w(WeylTag::S2));
    assert_eq!(s1s2.matrix(), w(WeylTag::S1S2).matrix());
    assert_eq!(w(WeylTag::S2).mul(&w(WeylTag::S1)).matrix(), w(WeylTag::S2S1).matrix());
    assert_eq!(s1s2.mul(&s1s2).matrix(), w(WeylTag::J).matrix());
    let mats: Vec<_> = WeylTag::ALL.iter().map(|t| w(*t).matrix().clone()).collect();
    for i in 0..8 {
        for j in 0..i {
            assert_ne!(mats[i], mats[j]);
        }
    }
}

#[test]
fn minors_fixtures() {
    assert_eq!(minors(&ExactMatrix4::identity()), (qi(0), qi(0), qi(0)));
    // J: a = 0, b = I, c = −I, d = 0, so only Δ₃ = [[0,1],[−1,0]] is nondegenerate.
    assert_eq!(minors(&ExactMatrix4::j_form()), (qi(0), qi(0), qi(1)));
    let g = CellDecomp {
        cell: CellTag::J,
        u1: UCoords::new(q(1, 2), qi(3), q(-1, 3), qi(2)),
        t: (qi(2), qi(3), qi(5)),
        u2: UCoords::new(qi(1), q(2, 5), qi(0), q(1, 7)),
    }
    .reconstruct()
    .unwrap();
    let (d1, d2, d3) = minors(g.matrix());
    let z = q(-7, 3);
    let (e1, e2, e3) = minors(&g.matrix().scale(&z));
    assert_eq!((e1, e2, e3), (&d1 * &z * &z, &d2 * &z * &z, &d3 * &z * &z));
}

#[test]
fn long_cell_fixtures() {
    let j = GSpElement::new(ExactMatrix4::j_form()).unwrap();
    let d = bruhat_long_cell(&j).unwrap();
    assert_eq!(d.u1, UCoords::zero());
    assert_eq!(d.u2, UCoords::zero());
    assert_eq!(d.t, (qi(1), qi(1), qi(1)));
    let s1 = WeylElem::new(WeylTag::S1).element;
    assert!(matches!(bruhat_long_cell(&s1), Err(GroupError::NotInCell(_))));
}

#[test]
fn each_weyl_cell_recognised() {
    for (tag, cell) in [(WeylTag::J, CellTag::J), (WeylTag::S1S2S1, CellTag::W121), (WeylTag::S2S1S2, CellTag::W212)] {
        let w = WeylElem::new(tag);
        assert_eq!(classify_cell(w.matrix()), Some(cell));
        let d = decompose(cell, &w.element).unwrap();
        assert_eq!(d.u1, UCoords::zero());
        assert_eq!(d.t, (qi(1), qi(1), qi(1)));
    }
    for tag in [WeylTag::Id, WeylTag::S1, WeylTag::S2, WeylTag::S1S2, WeylTag::S2S1] {
        assert_eq!(classify_cell(WeylElem::new(tag).matrix()), None, "{tag:?}");
    }
}

#[test]
fn u_sigma_examples() {
    let c_only = UCoords::new(qi(0), qi(0), qi(0), qi(5));
    let x_only = UCoords::new(qi(2), qi(0), qi(0), qi(0));
    assert!(u_sigma_member(WeylTag::S1S2S1, &c_only));
    assert!(!u_sigma_member(WeylTag::S1S2S1, &x_only));
    assert!(u_sigma_member(WeylTag::S2S1S2, &x_only));
    assert!(!u_sigma_member(WeylTag::J, &x_only));
    assert!(u_sigma_member(WeylTag::J, &UCoords::zero()));
    assert!(u_sigma_member(WeylTag::Id, &UCoords::new(qi(1), qi(2), qi(3), qi(4))));
}

#[test]
fn relevant_orbit_examples() {
    let one = CharacterIndex::one();
    let d11 = TorusRep::new(qi(1), qi(1)).unwrap();
    let d21 = TorusRep::new(qi(2), qi(1)).unwrap();
    assert!(relevant_orbit(WeylTag::Id, &d11, one, one));
    assert!(!relevant_orbit(WeylTag::Id, &d21, one, one));
    assert!(relevant_orbit(WeylTag::J, &d21, one, CharacterIndex::new(3, -2).unwrap()));
    assert!(!relevant_orbit(WeylTag::S1, &d11, one, one));
    let m1 = CharacterIndex::new(4, 1).unwrap();
    let m2 = CharacterIndex::new(2, 1).unwrap();
    let d = TorusRep::new(qi(-2), qi(7)).unwrap();
    assert!(relevant_orbit(WeylTag::S2S1S2, &d, m1, m2));
    assert!(relevant_check_by_conjugation(WeylTag::S2S1S2, &d, m1, m2));
}

#[test]
fn u_sigma_characterisation() {
    // With the signed representatives, conjugation is the identity on U_σ for s1s2s1 and J but
    // inversion (x ↦ −x) for s2s1s2. Non-relevant σ move some u ∈ U_σ.
    let samples: Vec<UCoords> = (1..=4)
        .flat_map(|k| Root::ALL.into_iter().map(move |r| UCoords::root(r, q(k, 3))))
        .collect();
    for tag in WeylTag::ALL {
        let w = WeylElem::new(tag).element;
        let mut moved = false;
        for u in &samples {
            if !u_sigma_member(tag, u) {
                continue;
            }
            let conj = u_matrix(u).conj_by(&w);
            let v = u_coords(conj.matrix()).unwrap();
            match tag {
                WeylTag::S1S2S1 | WeylTag::J => assert_eq!(&v, u, "{tag:?}"),
                WeylTag::S2S1S2 => assert_eq!(v, UCoords::new(-u.x.clone(), qi(0), qi(0), qi(0))),
                _ => {}
            }
            if &v != u {
                moved = true;
            }
        }
        if !matches!(tag, WeylTag::Id | WeylTag::S1S2S1 | WeylTag::S2S1S2 | WeylTag::J) {
            assert!(moved, "{tag:?}");
        }
    }
}

#[test]
fn siegel_levi_factorisations() {
    let u = UCoords::new(q(2, 3), q(-1, 2), q(5, 7), q(3, 4));
    let l = left_siegel_coords(&u);
    assert_eq!(&levi_n(&u.x) * &siegel(&l[0], &l[1], &l[2]), u_raw(&u));
    assert_eq!(from_left_siegel(&u.x, &l), u);
    let r = right_siegel_coords(&u);
    assert_eq!(&siegel(&r[0], &r[1], &r[2]) * &levi_n(&u.x), u_raw(&u));
    assert_eq!(from_right_siegel(&u.x, &r), u);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn u_round_trip(u in ucoords()) {
        let g = u_matrix(&u);
        prop_assert_eq!(multiplier(g.matrix()).unwrap(), Q::one());
        prop_assert_eq!(u_coords(g.matrix()).unwrap(), u);
    }

    #[test]
    fn multiplier_is_multiplicative(u in ucoords(), v in ucoords(), d1 in nonzero_rat(), d2 in nonzero_rat(), w in 0usize..8) {
        let t = TorusRep::new(d1, d2).unwrap().element();
        let g = u_matrix(&u).mul(&WeylElem::new(WeylTag::ALL[w]).element).mul(&t);
        let h = t.mul(&u_matrix(&v));
        let gh = GSpElement::new(g.matrix() * h.matrix()).unwrap();
        prop_assert_eq!(gh.mu(), &(g.mu() * h.mu()));
        prop_assert_eq!(multiplier(g.matrix()).unwrap(), g.mu().clone());
    }

    #[test]
    fn weyl_normalises_torus(t1 in nonzero_rat(), t2 in nonzero_rat(), t3 in nonzero_rat(), w in 0usize..8) {
        let t = torus(&t1, &t2, &t3).unwrap();
        let s = WeylElem::new(WeylTag::ALL[w]).element;
        prop_assert!(t.conj_by(&s).matrix().is_diagonal());
    }

    #[test]
    fn psi_conjugation(u in ucoords(), m in char_index()) {
        let tm = t_m(m);
        let conj = u_matrix(&u).conj_by(&tm.inverse());
        // t_m⁻¹ u t_m, i.e. conjugation by t_m.
        let conj2 = u_matrix(&u).conj_by(&tm);
        let v = u_coords(conj2.matrix()).unwrap();
        prop_assert_eq!(psi_exponent(m, &u), psi_exponent(CharacterIndex::one(), &v));
        prop_assert!(u_coords(conj.matrix()).is_ok());
    }

    #[test]
    fn long_cell_round_trip(u1 in ucoords(), u2 in ucoords(), t1 in nonzero_rat(), t2 in nonzero_rat(), t3 in nonzero_rat()) {
        let d = CellDecomp { cell: CellTag::J, u1, t: (t1, t2, t3), u2 };
        let g = d.reconstruct().unwrap();
        prop_assert_eq!(classify_cell(g.matrix()), Some(CellTag::J));
        prop_assert_eq!(bruhat_long_cell(&g).unwrap(), d);
    }

    #[test]
    fn cell_121_round_trip(u1 in ucoords(), x2 in rat(), a2 in rat(), b2 in rat(), t1 in nonzero_rat(), t2 in nonzero_rat(), t3 in nonzero_rat()) {
        let d = CellDecomp { cell: CellTag::W121, u1, t: (t1, t2, t3), u2: UCoords::new(x2, a2, b2, Q::zero()) };
        let g = d.reconstruct().unwrap();
        prop_assert_eq!(classify_cell(g.matrix()), Some(CellTag::W121));
        prop_assert_eq!(bruhat_121_cell(&g).unwrap(), d);
    }

    #[test]
    fn cell_212_round_trip(u1 in ucoords(), a2 in rat(), b2 in rat(), c2 in rat(), t1 in nonzero_rat(), t2 in nonzero_rat(), t3 in nonzero_rat()) {
        let d = CellDecomp { cell: CellTag::W212, u1, t: (t1, t2, t3), u2: UCoords::new(Q::zero(), a2, b2, c2) };
        let g = d.reconstruct().unwrap();
        prop_assert_eq!(classify_cell(g.matrix()), Some(CellTag::W212));
        prop_assert_eq!(bruhat_212_cell(&g).unwrap(), d);
    }

    #[test]
    fn relevance_matches_conjugation_oracle(d1 in nonzero_rat(), d2 in nonzero_rat(), m1 in char_index(), m2 in char_index(), w in 0usize..8) {
        let tag = WeylTag::ALL[w];
        let d = TorusRep::new(d1, d2).unwrap();
        prop_assert_eq!(relevant_orbit(tag, &d, m1, m2), relevant_check_by_conjugation(tag, &d, m1, m2));
    }

    #[test]
    fn relevance_oracle_on_forced_loci(d1 in nonzero_rat(), m1 in char_index(), m2 in char_index()) {
        let z = |v: i64| qi(v);
        // Points on each relevance locus, where random sampling would almost never land.
        let id = TorusRep::new(z(m1.m1) / z(m2.m1), z(m1.m1) * z(m1.m2) / (z(m2.m1) * z(m2.m2))).unwrap();
        prop_assert!(relevant_check_by_conjugation(WeylTag::Id, &id, m1, m2));
        let d121 = TorusRep::new(d1.clone(), &d1 * z(m1.m2) / z(m2.m2)).unwrap();
        prop_assert!(relevant_check_by_conjugation(WeylTag::S1S2S1, &d121, m1, m2));
        let d212 = TorusRep::new(-z(m1.m1) / z(m2.m1), d1.clone()).unwrap();
        prop_assert!(relevant_check_by_conjugation(WeylTag::S2S1S2, &d212, m1, m2));
    }

    #[test]
    fn canonical_forms(u in ucoords(), g in int_ucoords(), h in int_ucoords()) {
        let c = left_canonical(&u);
        prop_assert_eq!(left_canonical(&c), c.clone());
        let moved = u_coords(&(u_matrix(&g).matrix() * u_matrix(&u).matrix())).unwrap();
        prop_assert_eq!(left_canonical(&moved), c);
        let all = Root::ALL;
        let r = right_canonical(&u, &all);
        prop_assert_eq!(right_canonical(&r, &all), r.clone());
        let moved = u_coords(&(u_matrix(&u).matrix() * u_matrix(&h).matrix())).unwrap();
        prop_assert_eq!(right_canonical(&moved, &all), r);
    }
}
