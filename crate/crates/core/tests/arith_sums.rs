use gsp4_core::arith_sums::*;
use gsp4_core::exact_group::CharacterIndex;
use gsp4_core::Parallelism;
use num_complex::Complex64;
use proptest::prelude::*;

fn spec(a: i64, b: i64, d: u64, n: u64) -> ElementarySumSpec {
    ElementarySumSpec::new(a, b, d, n).unwrap()
}

fn brute(a: i64, b: i64, d: u64, n: u64) -> i128 {
    s_bruteforce_int(&spec(a, b, d, n), Parallelism::Sequential, 1e-9).unwrap()
}

fn ci(a: i64, b: i64) -> CharacterIndex {
    CharacterIndex::new(a, b).unwrap()
}

#[test]
fn elementary_examples() {
    assert_eq!(brute(1, 1, 1, 5), 0);
    assert_eq!(brute(5, 5, 1, 5), 25);
    assert_eq!(brute(1, 1, 5, 5), -1);
    assert_eq!(s_primepower(0, 0, 0, 1, 5).unwrap(), 0);
    assert_eq!(s_primepower(1, 1, 0, 1, 5).unwrap(), 25);
    assert_eq!(s_primepower(0, 0, 1, 1, 5).unwrap(), -1);
    assert!(s_primepower(0, 0, 2, 1, 5).is_err());
    assert!(ElementarySumSpec::new(1, 1, 4, 6).is_err());
}

#[test]
fn bruteforce_split_independent() {
    for (a, b, d, n) in [(3, 7, 4, 12), (1, 5, 3, 45), (2, 2, 7, 49)] {
        let s = spec(a, b, d, n);
        assert_eq!(s_bruteforce(&s, Parallelism::Sequential), s_bruteforce(&s, Parallelism::Rayon));
    }
}

#[test]
fn closed_form_matches_bruteforce_small() {
    for n in 1..=24u64 {
        for d in (1..=n).filter(|d| n % d == 0) {
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    assert_eq!(s_closed(&spec(a, b, d, n)), brute(a, b, d, n), "S({a},{b},{d},{n})");
                }
            }
        }
    }
}

#[test]
fn nonvanishing_filter() {
    for n in [8u64, 9, 12, 27, 36] {
        for d in (1..=n).filter(|d| n % d == 0) {
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let sp = spec(a, b, d, n);
                    if !nonvanishing_criterion(&sp) {
                        assert_eq!(s_closed(&sp), 0);
                        assert_eq!(brute(a, b, d, n), 0);
                    }
                }
            }
        }
    }
}

#[test]
fn dirichlet_characters() {
    let chi = DirichletChar::prime_power_of_generator(7, 1).unwrap();
    assert!(!chi.is_even());
    assert!(DirichletChar::prime_power_of_generator(7, 2).unwrap().is_even());
    assert_eq!(chi.eval(7), Complex64::new(0.0, 0.0));
    let t = DirichletChar::trivial(6);
    assert_eq!(t.eval(5), Complex64::new(1.0, 0.0));
    assert_eq!(t.eval(3), Complex64::new(0.0, 0.0));
    let mut bad = t.values().to_vec();
    bad[5] = Complex64::new(-1.0, 0.0);
    bad[1] = Complex64::new(-1.0, 0.0);
    assert!(DirichletChar::from_table(6, bad).is_err());
    let legendre: Vec<Complex64> = [0.0, 1.0, -1.0, -1.0, 1.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
    assert!(DirichletChar::from_table(5, legendre).is_ok());
}

#[test]
fn identity_examples() {
    let one = DirichletChar::trivial(1);
    let r = identity_contribution(1, 1, ci(1, 1), ci(1, 1), &one).unwrap();
    assert!(r.nonzero);
    assert_eq!((r.s, r.d, r.big_d, r.sum_term), (1, 1, 1, 1));
    assert_eq!(r.value, Complex64::new(1.0, 0.0));

    let r = identity_contribution(1, 1, ci(1, 1), ci(2, 1), &one).unwrap();
    assert!(!r.nonzero);
    assert_eq!(r.value, Complex64::new(0.0, 0.0));

    for p in [2i64, 3, 5] {
        let n = (p * p) as u64;
        let r = identity_contribution(n, 1, ci(p, 1), ci(p, 1), &one).unwrap();
        let o = identity_contribution_oracle(n, 1, ci(p, 1), ci(p, 1), &one).unwrap();
        assert_eq!(r.s, p);
        assert_eq!(r.prefactor * num_rational::Ratio::from_integer(r.sum_term), o.exact);
    }

    assert!(identity_contribution(2, 2, ci(1, 1), ci(1, 1), &DirichletChar::trivial(2)).is_err());
    assert!(identity_contribution(3, 2, ci(1, 1), ci(1, 1), &DirichletChar::trivial(5)).is_err());
}

fn grid(bound: i64, signed: bool) -> Vec<(CharacterIndex, CharacterIndex)> {
    let vals: Vec<i64> = if signed {
        (1..=bound).flat_map(|v| [v, -v]).collect()
    } else {
        (1..=bound).collect()
    };
    let mut out = Vec::new();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                for &d in &vals {
                    out.push((ci(a, b), ci(c, d)));
                }
            }
        }
    }
    out
}

#[test]
fn identity_matches_both_oracles_signed_entries() {
    let one = DirichletChar::trivial(1);
    let mut tested = 0;
    for n in 1..=16u64 {
        for (m1, m2) in grid(4, true) {
            let r = identity_contribution(n, 1, m1, m2, &one).unwrap();
            if identity_setup(n, m1, m2).is_none() {
                assert!(!r.nonzero);
                continue;
            }
            tested += 1;
            let closed = r.prefactor * num_rational::Ratio::from_integer(r.sum_term);
            let o = identity_contribution_oracle(n, 1, m1, m2, &one).unwrap();
            let l = identity_contribution_lattice_oracle(n, 1, m1, m2, &one).unwrap();
            assert_eq!(closed, o.exact, "n={n} {m1:?} {m2:?}");
            assert_eq!(closed, l.exact, "n={n} {m1:?} {m2:?}");
            assert_eq!(r.d, r.d_theorem);
        }
    }
    assert!(tested > 100);
}

#[test]
fn t_factor_matches_archimedean_rescaling() {
    let one = DirichletChar::trivial(1);
    for n in 1..=36u64 {
        for (m1, m2) in grid(6, false) {
            let r = identity_contribution(n, 1, m1, m2, &one).unwrap();
            if identity_setup(n, m1, m2).is_none() {
                continue;
            }
            let scale = ((m1.m1.pow(4) * m1.m2.pow(3)) as f64).abs();
            let lhs = r.value / scale;
            assert!((lhs - r.t_factor).norm() <= 1e-12 * (1.0 + lhs.norm()), "n={n} {m1:?} {m2:?}");
        }
    }
}

#[test]
fn exchange_symmetry_of_sum_term() {
    let one = DirichletChar::trivial(1);
    for n in 1..=36u64 {
        let ni = n as i64;
        for (m1, m2) in grid(6, false) {
            let Some(data) = identity_setup(n, m1, m2) else { continue };
            // Exchanging m₁ and m₂ replaces (s, t) by (n/s, n/t).
            let swapped = identity_setup(n, m2, m1).expect("relevance is symmetric");
            assert_eq!(swapped.s, ni / data.s);
            assert_eq!(swapped.t, ni / data.t);
            let r = identity_contribution(n, 1, m1, m2, &one).unwrap();
            let (s, t, d) = (data.s, data.t, r.d as u64);
            let lhs = s_closed(&spec(m1.m1 * (ni / num_integer::gcd(t, ni / s)), m1.m2 * t, d, n));
            let rhs = s_closed(&spec(m2.m1 * (ni / num_integer::gcd(s, ni / t)), m2.m2 * (ni / t), d, n));
            assert_eq!(lhs, rhs, "n={n} {m1:?} {m2:?}");
        }
    }
}

#[test]
fn sign_of_s() {
    let even = DirichletChar::prime_power_of_generator(7, 2).unwrap();
    let odd = DirichletChar::prime_power_of_generator(7, 1).unwrap();
    let mut seen = 0;
    for n in [1u64, 4, 9, 12, 18, 36] {
        for (m1, m2) in grid(6, false) {
            let plus = identity_contribution_signed(n, 7, m1, m2, &even, 1).unwrap();
            if !plus.nonzero {
                continue;
            }
            let minus = identity_contribution_signed(n, 7, m1, m2, &even, -1).unwrap();
            assert!((plus.value - minus.value).norm() < 1e-9);
            let p = identity_contribution_signed(n, 7, m1, m2, &odd, 1).unwrap();
            let m = identity_contribution_signed(n, 7, m1, m2, &odd, -1).unwrap();
            assert!((p.value + m.value).norm() < 1e-9);
            seen += 1;
        }
    }
    assert!(seen > 10);
}

proptest! {
    #[test]
    fn symmetric_in_a_b(a in -200i64..200, b in -200i64..200, n in 1u64..400, k in 0usize..8) {
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let d = divs[k % divs.len()];
        prop_assert_eq!(s_closed(&spec(a, b, d, n)), s_closed(&spec(b, a, d, n)));
        prop_assert_eq!(s_closed(&spec(a, b, d, n)), s_closed(&spec(a, -b, d, n)));
    }

    #[test]
    fn closed_form_periodic(a in -100i64..100, b in -100i64..100, n in 1u64..60, k in 0usize..8) {
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let d = divs[k % divs.len()];
        let ni = n as i64;
        prop_assert_eq!(s_closed(&spec(a, b, d, n)), s_closed(&spec(a.rem_euclid(ni), b + 3 * ni, d, n)));
    }

    #[test]
    fn primepower_integral_and_filtered(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), n in 1u32..5, i in 0u32..6, j in 0u32..6, k in 0u32..5) {
        let (i, j, k) = (i.min(n), j.min(n), k.min(n));
        let v = s_primepower(i, j, k, n, p).unwrap();
        if !(n - i) .saturating_add(n - j) .le(&(k + 1)) {
            prop_assert_eq!(v, 0);
        }
    }
}
