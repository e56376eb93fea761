mod assemble;
mod config;
mod error;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use gsp4_core::arch::transforms::SpectralQuadrature;
use gsp4_core::arch::{
    c_function, identity_transform, plancherel_density, plancherel_via_c, whittaker_eta, whittaker_normalized,
    whittaker_unnormalized, APoint, SpectralParam, SpectralTestFn, WhittakerOptions,
};
use gsp4_core::arith_sums::{nonvanishing_criterion, s_bruteforce_int, s_closed, ElementarySumSpec};
use gsp4_core::exact_group::{relevant_check_by_conjugation, relevant_orbit, CellTag, TorusRep, WeylTag, Q};
use gsp4_core::kloosterman::{enumerate_cell, kloos, perturb, summand, EnumOptions, KloostermanSpec};
use gsp4_core::Parallelism;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use config::{OmegaSpec, RunConfig};
use error::CliError;
use report::{Format, Num, Provenance, Report, Status};

#[derive(Parser)]
#[command(name = "gsp4", version, about = "Geometric-side computations for GSp(4)")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Numerical tolerance of the quadratures.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Largest |s·d| enumerated by the Kloosterman engines.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Run without rayon worker threads.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Elementary exponential sums.
    #[command(subcommand)]
    Sums(SumsCommand),
    /// Symplectic Kloosterman sum of one cell.
    Kloosterman(KloostermanArgs),
    /// Relevant Weyl orbits.
    #[command(subcommand)]
    Orbits(OrbitsCommand),
    /// Archimedean special functions and transforms.
    #[command(subcommand)]
    Arch(ArchCommand),
    /// All geometric-side terms for one configuration.
    GeometricSide(GeometricArgs),
    /// Quick invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum SumsCommand {
    /// S(a, b, d, N) by closed form, and by brute force when N is small.
    Classical {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long)]
        d: u64,
        #[arg(long = "N")]
        level: u64,
        /// Largest N for the brute-force oracle.
        #[arg(long, default_value_t = 200)]
        oracle_cap: u64,
    },
}

/// A character index m = (m1, m2) written as "a,b".
#[derive(Clone, Copy, Debug)]
struct Pair(i64, i64);

impl FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or("expected a,b")?;
        Ok(Pair(a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
    }
}

/// Two floats written as "x,y".
#[derive(Clone, Copy, Debug)]
struct FPair(f64, f64);

impl FromStr for FPair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or("expected x,y")?;
        Ok(FPair(a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
    }
}

#[derive(Args)]
struct KloostermanArgs {
    /// J, 121 or 212.
    #[arg(long, value_parser = parse_cell)]
    cell: CellTag,
    #[arg(long = "N", default_value_t = 1)]
    level: u64,
    #[arg(long, allow_negative_numbers = true)]
    s: i64,
    #[arg(long, allow_negative_numbers = true)]
    d: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    m: i64,
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    m1: Pair,
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    m2: Pair,
    /// Character ω = (g^j ↦ e(kj/(N−1))) for prime N; trivial when absent.
    #[arg(long, allow_negative_numbers = true)]
    omega_k: Option<i64>,
    /// Coset-perturbed representatives checked per class.
    #[arg(long, default_value_t = 5)]
    perturbations: usize,
}

fn parse_cell(s: &str) -> Result<CellTag, String> {
    CellTag::parse(s).ok_or_else(|| format!("unknown cell '{s}', expected J, 121 or 212"))
}

fn parse_weyl(s: &str) -> Result<WeylTag, String> {
    WeylTag::parse(s).ok_or_else(|| format!("unknown Weyl element '{s}'"))
}

#[derive(Subcommand)]
enum OrbitsCommand {
    /// Whether (σ, δ) is relevant for (m1, m2), by the classifier and by conjugation.
    Relevant {
        /// One Weyl element; all eight when absent.
        #[arg(long, value_parser = parse_weyl)]
        sigma: Option<WeylTag>,
        #[arg(long, allow_hyphen_values = true)]
        d1: Q,
        #[arg(long, allow_hyphen_values = true)]
        d2: Q,
        #[arg(long, allow_hyphen_values = true)]
        m1: Pair,
        #[arg(long, allow_hyphen_values = true)]
        m2: Pair,
    },
}

#[derive(Args, Clone)]
struct NuArgs {
    /// Real parts of (ν1, ν2).
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    re: FPair,
    /// Imaginary parts of (ν1, ν2).
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    im: FPair,
}

impl NuArgs {
    fn nu(&self) -> SpectralParam {
        SpectralParam::new(Complex64::new(self.re.0, self.im.0), Complex64::new(self.re.1, self.im.1))
    }
}

#[derive(Subcommand)]
enum ArchCommand {
    /// Whittaker function W(ν, a).
    Whittaker {
        #[command(flatten)]
        nu: NuArgs,
        #[arg(long)]
        a: FPair,
        /// Character frequencies (η1, η2); the standard character when absent.
        #[arg(long)]
        eta: Option<FPair>,
        /// Without the Gamma normalization.
        #[arg(long)]
        unnormalized: bool,
    },
    /// Harish-Chandra c-function.
    Cfun {
        #[command(flatten)]
        nu: NuArgs,
    },
    /// Plancherel density at real (ν1, ν2), by two routes.
    Plancherel {
        #[arg(long, allow_hyphen_values = true)]
        nu: FPair,
    },
    /// Identity-orbit transform of a Gaussian test function.
    IdentityTransform {
        #[arg(long, default_value_t = 2.0)]
        temperature: f64,
        #[arg(long, default_value = "1,1")]
        t1: FPair,
        #[arg(long, default_value = "1,1")]
        t2: FPair,
        #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
        m1: Pair,
        #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
        m2: Pair,
        #[arg(long, default_value_t = 24)]
        spectral_points: usize,
    },
}

#[derive(Args)]
struct GeometricArgs {
    /// TOML run configuration; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long = "N")]
    level: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    m1: Option<Pair>,
    #[arg(long, allow_hyphen_values = true)]
    m2: Option<Pair>,
    /// Gaussian test function with this temperature.
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    spectral_points: Option<usize>,
    #[arg(long)]
    volume_normalization: Option<f64>,
    /// Leave the experimental J/121/212 transforms pending.
    #[arg(long)]
    skip_experimental: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only these suites.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(selftest::SUITES))]
    only: Vec<String>,
    /// Flip a sign in the prime-power sum formula; the oracle comparisons must catch it.
    #[arg(long)]
    mutate_primepower_sign: bool,
}

fn whittaker_options(tol: Option<f64>) -> WhittakerOptions {
    WhittakerOptions { tol: tol.unwrap_or(WhittakerOptions::default().tol), ..Default::default() }
}

fn point(p: FPair) -> Result<APoint, CliError> {
    Ok(APoint::new(p.0, p.1)?)
}

fn char_index(p: Pair) -> Result<gsp4_core::exact_group::CharacterIndex, CliError> {
    Ok(gsp4_core::exact_group::CharacterIndex::new(p.0, p.1)?)
}

fn cmd_classical(a: i64, b: i64, d: u64, level: u64, cap: u64, par: Parallelism) -> Result<Report, CliError> {
    let sp = ElementarySumSpec::new(a, b, d, level)?;
    let mut r = Report::new("sums classical", json!({ "a": a, "b": b, "d": d, "N": level, "oracle_cap": cap }));
    let closed = s_closed(&sp);
    let brute = if level <= cap { Some(s_bruteforce_int(&sp, par, 1e-6)?) } else { None };
    let agree = brute.map(|v| v == closed);
    if agree == Some(false) {
        r.mark(Status::InvariantFailure);
    }
    r.push(json!({
        "s_closed": Num::exact(closed, Provenance::ClosedForm),
        "s_bruteforce": brute.map(|v| Num::exact(v, Provenance::Bruteforce)),
        "oracle_agrees": agree,
        "nonvanishing_criterion": nonvanishing_criterion(&sp),
    }));
    Ok(r)
}

fn cmd_kloosterman(k: &KloostermanArgs, budget: u64, par: Parallelism) -> Result<Report, CliError> {
    let (m1, m2) = (char_index(k.m1)?, char_index(k.m2)?);
    let omega = match k.omega_k {
        Some(j) => OmegaSpec::PrimeGenerator { k: j },
        None => OmegaSpec::Trivial,
    };
    let spec = KloostermanSpec::new(k.cell, k.level, k.s, k.d, k.m, m1, m2).with_omega(omega.build(k.level)?);
    let mut r = Report::new(
        "kloosterman",
        json!({
            "cell": k.cell.name(), "N": k.level, "s": k.s, "d": k.d, "m": k.m,
            "m1": [k.m1.0, k.m1.1], "m2": [k.m2.0, k.m2.1], "omega": omega, "budget": budget,
        }),
    );
    let opts = EnumOptions { budget, window_offset: 0, parallelism: par };
    let v = kloos(&spec, &opts)?;
    // Each class summand must not depend on the coset representative.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut spread = 0.0f64;
    for rep in enumerate_cell(&spec, &opts)? {
        let base = summand(&spec, rep.g.matrix());
        for _ in 0..k.perturbations {
            let mut shift = || [0; 4].map(|_: i32| rng.gen_range(-3i64..=3));
            let g = perturb(k.cell, &rep.g, shift(), shift());
            spread = spread.max((summand(&spec, g.matrix()) - base).norm());
        }
    }
    let well_defined = spread <= 1e-12;
    if !well_defined {
        r.mark(Status::InvariantFailure);
    }
    r.push(json!({
        "class_count": v.class_count,
        "empty": v.class_count == 0,
        "value": Num::complex(v.value, Provenance::Bruteforce),
        "well_defined": well_defined,
        "representative_spread": spread,
    }));
    Ok(r)
}

fn cmd_relevant(sigma: Option<WeylTag>, d1: Q, d2: Q, m1: Pair, m2: Pair) -> Result<Report, CliError> {
    let delta = TorusRep::new(d1.clone(), d2.clone())?;
    let (a, b) = (char_index(m1)?, char_index(m2)?);
    let mut r = Report::new(
        "orbits relevant",
        json!({ "d1": d1.to_string(), "d2": d2.to_string(), "m1": [m1.0, m1.1], "m2": [m2.0, m2.1] }),
    );
    let tags: Vec<WeylTag> = sigma.map(|s| vec![s]).unwrap_or_else(|| WeylTag::ALL.to_vec());
    for tag in tags {
        let fast = relevant_orbit(tag, &delta, a, b);
        let slow = relevant_check_by_conjugation(tag, &delta, a, b);
        if fast != slow {
            r.mark(Status::InvariantFailure);
        }
        r.push(json!({ "sigma": tag.name(), "relevant": fast, "conjugation_check": slow }));
    }
    Ok(r)
}

fn cmd_arch(c: &ArchCommand, tol: Option<f64>, par: Parallelism) -> Result<Report, CliError> {
    let o = whittaker_options(tol);
    let quad = Provenance::Quadrature(o.tol);
    Ok(match c {
        ArchCommand::Whittaker { nu, a, eta, unnormalized } => {
            let (n, p) = (nu.nu(), point(*a)?);
            let v = match (eta, unnormalized) {
                (Some(e), _) => whittaker_eta(&n, &p, e.0, e.1, &o)?,
                (None, true) => whittaker_unnormalized(&n, &p, &o)?,
                (None, false) => whittaker_normalized(&n, &p, &o)?,
            };
            let mut r = Report::new(
                "arch whittaker",
                json!({ "nu": n, "a": p, "eta": eta.map(|e| [e.0, e.1]), "normalized": eta.is_none() && !unnormalized, "tol": o.tol }),
            );
            r.push(json!({ "value": Num::complex(v, quad) }));
            r
        }
        ArchCommand::Cfun { nu } => {
            let n = nu.nu();
            let mut r = Report::new("arch cfun", json!({ "nu": n }));
            r.push(json!({ "value": Num::complex(c_function(&n)?, Provenance::ClosedForm) }));
            r
        }
        ArchCommand::Plancherel { nu } => {
            let x = plancherel_density(nu.0, nu.1);
            let y = plancherel_via_c(nu.0, nu.1)?;
            let dev = (x - y).abs() / y.abs().max(1e-300);
            let mut r = Report::new("arch plancherel", json!({ "nu": [nu.0, nu.1] }));
            if dev > 1e-10 {
                r.mark(Status::InvariantFailure);
            }
            r.push(json!({
                "density": Num::real(x, Provenance::ClosedForm),
                "via_c_function": Num::real(y, Provenance::ClosedForm),
                "relative_deviation": dev,
            }));
            r
        }
        ArchCommand::IdentityTransform { temperature, t1, t2, m1, m2, spectral_points } => {
            let h = SpectralTestFn::Gaussian { temperature: *temperature };
            let q = SpectralQuadrature { n: *spectral_points, whittaker: o, ..SpectralQuadrature::default() };
            let v = identity_transform(&h, &point(*t1)?, &point(*t2)?, char_index(*m1)?, char_index(*m2)?, &q, par)?;
            let mut r = Report::new(
                "arch identity-transform",
                json!({
                    "h": h, "t1": [t1.0, t1.1], "t2": [t2.0, t2.1], "m1": [m1.0, m1.1], "m2": [m2.0, m2.1],
                    "spectral_points": spectral_points, "tol": o.tol,
                }),
            );
            r.push(json!({ "value": Num::complex(v, quad) }));
            r
        }
    })
}

fn geometric_config(g: &GeometricArgs, tol: Option<f64>, budget: Option<u64>) -> Result<RunConfig, CliError> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::from_toml(&std::fs::read_to_string(p)?)?,
        None => {
            let (Some(n), Some(level)) = (g.n, g.level) else {
                return Err(CliError::Usage("geometric-side needs --config or both --n and --N".into()));
            };
            RunConfig::minimal(n, level)
        }
    };
    if let Some(n) = g.n {
        cfg.n = n;
    }
    if let Some(l) = g.level {
        cfg.level = l;
    }
    if let Some(m) = g.m1 {
        cfg.m1 = [m.0, m.1];
    }
    if let Some(m) = g.m2 {
        cfg.m2 = [m.0, m.1];
    }
    if let Some(t) = g.temperature {
        cfg.h = SpectralTestFn::Gaussian { temperature: t };
    }
    if let Some(s) = g.spectral_points {
        cfg.spectral_points = s;
    }
    if let Some(v) = g.volume_normalization {
        cfg.volume_normalization = v;
    }
    if let Some(t) = tol {
        cfg.tol = t;
    }
    if let Some(b) = budget {
        cfg.budget = b;
    }
    cfg.skip_experimental |= g.skip_experimental;
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let par = if cli.sequential { Parallelism::Sequential } else { Parallelism::Rayon };
    let budget = cli.budget.unwrap_or(64);
    match &cli.command {
        Command::Sums(SumsCommand::Classical { a, b, d, level, oracle_cap }) => {
            cmd_classical(*a, *b, *d, *level, *oracle_cap, par)
        }
        Command::Kloosterman(k) => cmd_kloosterman(k, budget, par),
        Command::Orbits(OrbitsCommand::Relevant { sigma, d1, d2, m1, m2 }) => {
            cmd_relevant(*sigma, d1.clone(), d2.clone(), *m1, *m2)
        }
        Command::Arch(c) => cmd_arch(c, cli.tol, par),
        Command::GeometricSide(g) => assemble::run(&geometric_config(g, cli.tol, cli.budget)?, par),
        Command::Selftest(s) => Ok(selftest::run(&s.only, s.mutate_primepower_sign, par)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(&cli) {
        Ok(report) => match report.emit(cli.format, cli.out.as_deref()) {
            Ok(()) => report.exit_code(),
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            // A partial result still gets a report, so that callers can see what was attempted.
            if code == 3 {
                let mut r = Report::new(&command_name(&cli.command), Value::Null);
                r.mark(Status::Partial);
                r.push(json!({ "error": e.to_string() }));
                if let Err(e) = r.emit(cli.format, cli.out.as_deref()) {
                    eprintln!("error: {e}");
                }
            }
            code
        }
    };
    ExitCode::from(code as u8)
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Sums(_) => "sums classical",
        Command::Kloosterman(_) => "kloosterman",
        Command::Orbits(_) => "orbits relevant",
        Command::Arch(ArchCommand::Whittaker { .. }) => "arch whittaker",
        Command::Arch(ArchCommand::Cfun { .. }) => "arch cfun",
        Command::Arch(ArchCommand::Plancherel { .. }) => "arch plancherel",
        Command::Arch(ArchCommand::IdentityTransform { .. }) => "arch identity-transform",
        Command::GeometricSide(_) => "geometric-side",
        Command::Selftest(_) => "selftest",
    }
    .to_string()
}
