//! Geometric side: the identity term and the J/121/212 Kloosterman terms, each paired with
//! its Archimedean transform.

use gsp4_core::arch::transforms::{i_sigma_with_kernel, SpectralKernel};
use gsp4_core::arch::{identity_transform, reduced_point, ArchError, ISigmaOptions};
use gsp4_core::arch::transforms::SpectralQuadrature;
use gsp4_core::arith_sums::identity_contribution;
use gsp4_core::exact_group::CellTag;
use gsp4_core::kloosterman::{geometric_sum_terms, EnumOptions};
use gsp4_core::Parallelism;
use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Num, Provenance, Report, Status};

#[derive(Clone, Debug, Serialize)]
pub struct GeometricTerm {
    /// "identity", "J", "121" or "212".
    pub cell: String,
    pub experimental: bool,
    pub arithmetic_factor: Num,
    /// "identity" or {d1, d2} as exact rationals.
    pub arch_args: Value,
    /// None while pending (skipped or not converged).
    pub arch_value: Option<Num>,
    /// volume_normalization · arithmetic_factor · arch_value.
    pub product: Option<Num>,
    pub diagnostics: Value,
}

fn ratio_str(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn cell_name(c: CellTag) -> &'static str {
    match c {
        CellTag::J => "J",
        CellTag::W121 => "121",
        CellTag::W212 => "212",
    }
}

pub fn run(cfg: &RunConfig, par: Parallelism) -> Result<Report, CliError> {
    cfg.validate()?;
    let (m1, m2) = cfg.character_indices()?;
    let omega = cfg.omega.build(cfg.level)?;
    let mut report = Report::new("geometric-side", serde_json::to_value(cfg)?);
    report.volume_normalization = cfg.volume_normalization;
    let vol = cfg.volume_normalization;
    let quad = Provenance::Quadrature(cfg.tol);

    let spectral = SpectralQuadrature {
        n: cfg.spectral_points,
        whittaker: gsp4_core::arch::WhittakerOptions { tol: cfg.tol, ..Default::default() },
        ..SpectralQuadrature::default()
    };
    let mut totals: Vec<(&str, Complex64, usize, usize)> =
        ["identity", "J", "121", "212"].into_iter().map(|c| (c, Complex64::new(0.0, 0.0), 0, 0)).collect();
    let mut tally = |cell: &str, v: Option<Complex64>| {
        let e = totals.iter_mut().find(|t| t.0 == cell).expect("known cell");
        match v {
            Some(v) => {
                e.1 += v;
                e.2 += 1;
            }
            None => e.3 += 1,
        }
    };

    let id = identity_contribution(cfg.n, cfg.level, m1, m2, &omega)?;
    if id.nonzero {
        let (arch, diag) = match identity_transform(&cfg.h, &cfg.t1, &cfg.t2, m1, m2, &spectral, par) {
            Ok(v) => (Some(v), json!({})),
            Err(e) => {
                report.mark(Status::Partial);
                (None, json!({ "error": e.to_string() }))
            }
        };
        let product = arch.map(|a| a * id.t_factor * vol);
        tally("identity", product);
        report.push(GeometricTerm {
            cell: "identity".into(),
            experimental: false,
            arithmetic_factor: Num::complex(id.t_factor, Provenance::ClosedForm),
            arch_args: json!("identity"),
            arch_value: arch.map(|a| Num::complex(a, quad.clone())),
            product: product.map(|p| Num::complex(p, quad.clone())),
            diagnostics: json!({
                "s": id.s, "t": id.t, "d": id.d, "D": id.big_d, "d_theorem": id.d_theorem,
                "residue_sum": Num::complex(id.value, Provenance::ClosedForm),
                "reduced_t1": reduced_point(&cfg.t1, m1), "reduced_t2": reduced_point(&cfg.t2, m2),
                "error": diag.get("error"),
            }),
        });
    }

    let enum_opts = EnumOptions { budget: cfg.budget, window_offset: 0, parallelism: par };
    let terms = geometric_sum_terms(cfg.n, cfg.level, m1, m2, &omega, &enum_opts)?;
    let isigma = ISigmaOptions {
        r: cfg.isigma_radius,
        fail_above: cfg.isigma_fail_above,
        spectral: SpectralQuadrature { n: ISigmaOptions::default().spectral.n, ..spectral },
        ..ISigmaOptions::default()
    };
    let kernel = if cfg.skip_experimental || terms.terms.is_empty() {
        None
    } else {
        match SpectralKernel::build(&cfg.h, &reduced_point(&cfg.t1, m1), &isigma, par) {
            Ok(k) => Some(Ok(k)),
            Err(e) => {
                report.mark(Status::Partial);
                Some(Err(e))
            }
        }
    };
    for t in &terms.terms {
        let cell = cell_name(t.cell);
        let (arch, diag): (Option<Complex64>, Value) = match &kernel {
            None => (None, json!({ "skipped": true })),
            Some(Err(e)) => (None, json!({ "error": e.to_string() })),
            Some(Ok(k)) => {
                match i_sigma_with_kernel(t.cell, k, ratio_f64(&t.d1), ratio_f64(&t.d2), &cfg.t2, m1, m2, &isigma, par) {
                    Ok(v) => (
                        Some(v.value),
                        json!({
                            "radius": v.r,
                            "dimension": v.dimension,
                            "half_radius_value": [v.value_half_radius.re, v.value_half_radius.im],
                            "relative_change": v.diagnostic,
                        }),
                    ),
                    Err(e @ (ArchError::NoConvergence(_) | ArchError::QuadratureFailure(_))) => {
                        report.mark(Status::Partial);
                        (None, json!({ "error": e.to_string() }))
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        };
        let product = arch.map(|a| a * t.value * vol);
        tally(cell, product);
        report.push(GeometricTerm {
            cell: cell.into(),
            experimental: true,
            arithmetic_factor: Num::complex(t.value, Provenance::Bruteforce),
            arch_args: json!({ "d1": ratio_str(&t.d1), "d2": ratio_str(&t.d2) }),
            arch_value: arch.map(|a| Num::complex(a, quad.clone())),
            product: product.map(|p| Num::complex(p, quad.clone())),
            diagnostics: json!({
                "s": t.s, "d": t.d, "m": t.m, "prefactor": t.prefactor,
                "class_count": t.class_count,
                "kloosterman": Num::complex(t.kloos, Provenance::Bruteforce),
                "in_displayed_range": t.in_displayed_range,
                "arch": diag,
            }),
        });
    }

    let per_cell: Vec<Value> = totals
        .iter()
        .map(|(cell, v, done, pending)| {
            json!({ "cell": cell, "total": Num::complex(*v, quad.clone()), "terms": done, "pending": pending })
        })
        .collect();
    report.summary = Some(json!({
        "budget": terms.budget,
        "empty_ranges": terms.empty,
        "k121_present": terms.has_121,
        "identity_present": id.nonzero,
        "per_cell": per_cell,
    }));
    Ok(report)
}
