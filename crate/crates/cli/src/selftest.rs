//! Quick invariant suite over all engines, one record per invariant.

use gsp4_core::arch::roots::rho;
use gsp4_core::arch::iwasawa::identity4;
use gsp4_core::arch::*;
use gsp4_core::arith_sums::*;
use gsp4_core::exact_group::*;
use gsp4_core::kloosterman::*;
use gsp4_core::Parallelism;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{Report, Status};

type Outcome = Result<String, String>;
type Check = (&'static str, &'static str, fn(Parallelism) -> Outcome);

pub const SUITES: [&str; 4] = ["exact_group", "arith_sums", "kloosterman", "arch"];

const CHECKS: &[Check] = &[
    ("exact_group", "weyl_elements_symplectic", weyl_symplectic),
    ("exact_group", "bruhat_round_trip", bruhat_round_trip),
    ("exact_group", "relevant_orbit_vs_conjugation", relevant_orbits),
    ("arith_sums", "closed_form_vs_bruteforce", elementary_sums),
    ("arith_sums", "nonvanishing_filter", nonvanishing_filter),
    ("arith_sums", "identity_contribution_vs_residue_oracle", identity_oracle),
    ("kloosterman", "unit_j_cell_single_class", unit_j),
    ("kloosterman", "summand_well_defined", well_defined),
    ("kloosterman", "emptiness_pattern", emptiness),
    ("arch", "c_rho_is_one", c_rho),
    ("arch", "plancherel_routes_agree", plancherel_routes),
    ("arch", "whittaker_weyl_invariance", whittaker_weyl),
    ("arch", "spherical_at_identity", spherical_one),
];

fn ci(a: i64, b: i64) -> CharacterIndex {
    CharacterIndex::new(a, b).expect("nonzero entries")
}

fn nonzero_q(rng: &mut ChaCha8Rng) -> Q {
    let n = loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            break n;
        }
    };
    q(n, rng.gen_range(1..=5))
}

fn rand_u(rng: &mut ChaCha8Rng) -> UCoords {
    let mut r = || q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
    UCoords::new(r(), r(), r(), r())
}

fn weyl_symplectic(_: Parallelism) -> Outcome {
    for w in WeylTag::ALL {
        GSpElement::new(ExactMatrix4::from_ints(w.rows())).map_err(|e| format!("{}: {e}", w.name()))?;
    }
    Ok("8 elements".into())
}

fn bruhat_round_trip(_: Parallelism) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let d = CellDecomp {
            cell: CellTag::J,
            u1: rand_u(&mut rng),
            t: (nonzero_q(&mut rng), nonzero_q(&mut rng), nonzero_q(&mut rng)),
            u2: rand_u(&mut rng),
        };
        let g = d.reconstruct().map_err(|e| e.to_string())?;
        if bruhat_long_cell(&g).map_err(|e| e.to_string())? != d {
            return Err(format!("round trip changed {d:?}"));
        }
    }
    Ok("50 samples".into())
}

fn relevant_orbits(_: Parallelism) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut relevant = 0;
    for tag in WeylTag::ALL {
        for k in 0..30 {
            let delta = if k % 2 == 0 {
                TorusRep::new(nonzero_q(&mut rng), nonzero_q(&mut rng)).map_err(|e| e.to_string())?
            } else {
                // Half the samples on the locus d1 = d2 = 1, where many orbits are relevant.
                TorusRep::new(qi(1), qi(1)).map_err(|e| e.to_string())?
            };
            let mut v = || rng.gen_range(1i64..=3) * if rng.gen_bool(0.5) { -1 } else { 1 };
            let (m1, m2) = (ci(v(), v()), ci(v(), v()));
            let a = relevant_orbit(tag, &delta, m1, m2);
            if a != relevant_check_by_conjugation(tag, &delta, m1, m2) {
                return Err(format!("{} {delta:?} {m1:?} {m2:?}", tag.name()));
            }
            relevant += usize::from(a);
        }
    }
    Ok(format!("240 samples, {relevant} relevant"))
}

fn elementary_sums(par: Parallelism) -> Outcome {
    let mut count = 0;
    for n in 1..=12u64 {
        for d in (1..=n).filter(|d| n % d == 0) {
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let sp = ElementarySumSpec::new(a, b, d, n).map_err(|e| e.to_string())?;
                    let brute = s_bruteforce_int(&sp, par, 1e-6).map_err(|e| e.to_string())?;
                    let closed = s_closed(&sp);
                    if closed != brute {
                        return Err(format!("S({a},{b},{d},{n}): closed {closed}, brute force {brute}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} sums"))
}

fn nonvanishing_filter(par: Parallelism) -> Outcome {
    let mut filtered = 0;
    for n in [8u64, 9, 12, 16, 18] {
        for d in (1..=n).filter(|d| n % d == 0) {
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let sp = ElementarySumSpec::new(a, b, d, n).map_err(|e| e.to_string())?;
                    if !nonvanishing_criterion(&sp) {
                        filtered += 1;
                        if s_bruteforce_int(&sp, par, 1e-6).map_err(|e| e.to_string())? != 0 {
                            return Err(format!("S({a},{b},{d},{n}) is nonzero but filtered"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{filtered} filtered sums vanish"))
}

fn identity_oracle(_: Parallelism) -> Outcome {
    let one = DirichletChar::trivial(1);
    let vals = [1i64, -1, 2, -2];
    let mut tested = 0;
    for n in 1..=8u64 {
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        let (m1, m2) = (ci(a, b), ci(c, d));
                        let r = identity_contribution(n, 1, m1, m2, &one).map_err(|e| e.to_string())?;
                        if !r.nonzero {
                            continue;
                        }
                        let o = identity_contribution_oracle(n, 1, m1, m2, &one).map_err(|e| e.to_string())?;
                        if r.prefactor * Ratio::from_integer(r.sum_term) != o.exact {
                            return Err(format!("n={n} m1={m1:?} m2={m2:?}"));
                        }
                        tested += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{tested} nonzero cases"))
}

fn unit_j(par: Parallelism) -> Outcome {
    let sp = KloostermanSpec::new(CellTag::J, 1, 1, 1, 1, ci(1, 1), ci(1, 1));
    let v = kloos(&sp, &EnumOptions { budget: 8, window_offset: 0, parallelism: par }).map_err(|e| e.to_string())?;
    if v.class_count != 1 {
        return Err(format!("{} classes", v.class_count));
    }
    Ok(format!("value {:.3}", v.value.re))
}

fn well_defined(par: Parallelism) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = EnumOptions { budget: 64, window_offset: 0, parallelism: par };
    let (mut classes, mut worst) = (0usize, 0.0f64);
    for level in [1u64, 2] {
        for cell in CellTag::ALL {
            for (s, d) in [(1, 1), (2, 1), (1, 2), (2, 2), (-2, 4), (2, -1)] {
                let sp = KloostermanSpec::new(cell, level, s, d, 1, ci(2, -1), ci(1, 3));
                for r in enumerate_cell(&sp, &opts).map_err(|e| e.to_string())? {
                    let base = summand(&sp, r.g.matrix());
                    for _ in 0..5 {
                        let mut v = || [0; 4].map(|_: i32| rng.gen_range(-3i64..=3));
                        let h = perturb(cell, &r.g, v(), v());
                        worst = worst.max((summand(&sp, h.matrix()) - base).norm());
                    }
                    classes += 1;
                }
            }
        }
    }
    if worst > 1e-12 {
        return Err(format!("summand spread {worst:.2e}"));
    }
    Ok(format!("{classes} classes, spread {worst:.1e}"))
}

fn emptiness(par: Parallelism) -> Outcome {
    let opts = EnumOptions { budget: 64, window_offset: 0, parallelism: par };
    for level in [2u64, 3] {
        for cell in CellTag::ALL {
            for s in 1..=4i64 {
                for d in [1i64, 2, 3, 4, 9] {
                    let sp = KloostermanSpec::new(cell, level, s, d, 1, ci(1, 1), ci(1, 1));
                    let v = kloos(&sp, &opts).map_err(|e| e.to_string())?;
                    let n = level as i64;
                    if v.class_count > 0 && (s % n != 0 || (cell != CellTag::W121 && d % (n * n) != 0)) {
                        return Err(format!("{} N={level} s={s} d={d} is nonempty", cell.name()));
                    }
                }
            }
        }
    }
    Ok("N ∈ {2, 3}".into())
}

fn c_rho(_: Parallelism) -> Outcome {
    let c = c_function(&rho()).map_err(|e| e.to_string())?;
    if c != 1.0.into() {
        return Err(format!("c(ρ) = {c}"));
    }
    Ok("exact".into())
}

fn plancherel_routes(_: Parallelism) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (a, b) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let x = plancherel_density(a, b);
        let y = plancherel_via_c(a, b).map_err(|e| e.to_string())?;
        worst = worst.max((x - y).abs() / y.abs().max(1e-300));
    }
    if worst > 1e-10 {
        return Err(format!("relative deviation {worst:.2e}"));
    }
    Ok(format!("relative deviation {worst:.1e}"))
}

fn whittaker_weyl(_: Parallelism) -> Outcome {
    let nu = SpectralParam::imag(0.7, 1.9);
    let a = APoint::new(0.8, 1.3).map_err(|e| e.to_string())?;
    let o = WhittakerOptions::default();
    let base = whittaker_normalized(&nu, &a, &o).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for w in nu.weyl_orbit() {
        let v = whittaker_normalized(&w, &a, &o).map_err(|e| e.to_string())?;
        worst = worst.max((v - base).norm() / base.norm());
    }
    if worst > 1e-6 {
        return Err(format!("relative deviation {worst:.2e}"));
    }
    Ok(format!("relative deviation {worst:.1e}"))
}

fn spherical_one(par: Parallelism) -> Outcome {
    let nu = SpectralParam::imag(1.3, -0.4);
    let v = spherical_phi(&nu, &identity4(), SphericalRoute::K { n: 6 }, par).map_err(|e| e.to_string())?;
    if (v - 1.0).norm() > 1e-8 {
        return Err(format!("φ_ν(1) = {v}"));
    }
    Ok(format!("deviation {:.1e}", (v - 1.0).norm()))
}

pub fn run(only: &[String], mutate_primepower_sign: bool, par: Parallelism) -> Report {
    elementary::FLIP_PRIMEPOWER_SIGN.store(mutate_primepower_sign, std::sync::atomic::Ordering::Relaxed);
    let mut report = Report::new(
        "selftest",
        json!({ "only": only, "mutate_primepower_sign": mutate_primepower_sign }),
    );
    let (mut passed, mut failed) = (0, 0);
    for (suite, name, f) in CHECKS {
        if !only.is_empty() && !only.iter().any(|s| s == suite) {
            continue;
        }
        let outcome = f(par);
        let pass = outcome.is_ok();
        if pass {
            passed += 1;
        } else {
            failed += 1;
            report.mark(Status::InvariantFailure);
        }
        let detail = match outcome {
            Ok(d) | Err(d) => d,
        };
        report.push(json!({ "suite": suite, "invariant": name, "pass": pass, "detail": detail }));
    }
    report.summary = Some(json!({ "passed": passed, "failed": failed }));
    report
}
