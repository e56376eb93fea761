use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gsp4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsp4")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

fn im(v: &Value) -> f64 {
    v["im"].as_f64().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn classical_sum_with_oracle() {
    let out = gsp4(&["sums", "classical", "--a", "1", "--b", "1", "--d", "5", "--N", "5"]);
    assert_eq!(code(&out), 0);
    let r = &json_of(&out)["records"][0];
    assert_eq!(r["s_closed"]["exact"], "-1");
    assert_eq!(r["s_closed"]["provenance"], "closed_form");
    assert_eq!(r["s_bruteforce"]["exact"], "-1");
    assert_eq!(r["oracle_agrees"], true);
}

#[test]
fn classical_sum_trivial_case_and_oracle_cap() {
    let out = gsp4(&["sums", "classical", "--a", "5", "--b", "5", "--d", "1", "--N", "5", "--oracle-cap", "4"]);
    assert_eq!(code(&out), 0);
    let r = &json_of(&out)["records"][0];
    assert_eq!(r["s_closed"]["exact"], "25");
    assert!(r["s_bruteforce"].is_null());
}

#[test]
fn classical_sum_rejects_d_not_dividing_n() {
    let out = gsp4(&["sums", "classical", "--a", "1", "--b", "1", "--d", "3", "--N", "5"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn kloosterman_unit_j_cell() {
    let out = gsp4(&["kloosterman", "--cell", "J", "--s", "1", "--d", "1", "--m1", "1,1", "--m2", "1,1"]);
    assert_eq!(code(&out), 0);
    let r = &json_of(&out)["records"][0];
    assert_eq!(r["class_count"], 1);
    assert_eq!(r["well_defined"], true);
}

#[test]
fn kloosterman_empty_when_level_does_not_divide_s() {
    let out = gsp4(&["kloosterman", "--cell", "J", "--N", "2", "--s", "1", "--d", "4"]);
    assert_eq!(code(&out), 0);
    let r = &json_of(&out)["records"][0];
    assert_eq!(r["empty"], true);
    assert_eq!(re(&r["value"]), 0.0);
    assert_eq!(im(&r["value"]), 0.0);
}

#[test]
fn kloosterman_bad_cell_is_usage_error() {
    assert_eq!(code(&gsp4(&["kloosterman", "--cell", "s1", "--s", "1", "--d", "1"])), 2);
}

#[test]
fn kloosterman_over_budget_is_partial() {
    let out = gsp4(&["kloosterman", "--cell", "J", "--s", "10", "--d", "10", "--budget", "8"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json_of(&out)["status"], "partial");
}

#[test]
fn relevant_orbits_all_weyl_elements() {
    let out = gsp4(&["orbits", "relevant", "--d1", "1", "--d2", "1", "--m1", "1,1", "--m2", "1,1"]);
    assert_eq!(code(&out), 0);
    let recs = json_of(&out)["records"].as_array().unwrap().clone();
    assert_eq!(recs.len(), 8);
    for r in &recs {
        assert_eq!(r["relevant"], r["conjugation_check"]);
    }
    let j = recs.iter().find(|r| r["sigma"] == "J").unwrap();
    assert_eq!(j["relevant"], true);
}

#[test]
fn arch_commands() {
    let out = gsp4(&["arch", "cfun", "--re", "1,2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(re(&json_of(&out)["records"][0]["value"]), 1.0);

    let out = gsp4(&["arch", "plancherel", "--nu", "0.5,1.3"]);
    assert_eq!(code(&out), 0);
    assert!(json_of(&out)["records"][0]["relative_deviation"].as_f64().unwrap() < 1e-10);

    let w = |extra: &[&str]| {
        let mut args = vec!["arch", "whittaker", "--im", "0.5,1", "--a", "0.8,1.2"];
        args.extend_from_slice(extra);
        let out = gsp4(&args);
        assert_eq!(code(&out), 0);
        json_of(&out)["records"][0]["value"].clone()
    };
    let v = w(&[]);
    assert_eq!(v["provenance"], "quadrature(1e-9)");
    // The standard character is ψ_η at η = (1, 1).
    let u = w(&["--unnormalized"]);
    let e = w(&["--eta", "1,1"]);
    assert!((re(&u) - re(&e)).abs() <= 1e-8 * re(&u).abs());
}

#[test]
fn geometric_side_identity_term_matches_its_factors() {
    let out = gsp4(&["geometric-side", "--n", "1", "--N", "1", "--skip-experimental"]);
    assert_eq!(code(&out), 0);
    let rep = json_of(&out);
    assert_eq!(rep["volume_normalization"], 1.0);
    let id = &rep["records"][0];
    assert_eq!(id["cell"], "identity");
    assert_eq!(id["arch_args"], "identity");

    let out = gsp4(&["arch", "identity-transform", "--temperature", "2"]);
    let transform = json_of(&out)["records"][0]["value"].clone();
    assert_eq!(re(&id["arch_value"]), re(&transform));
    let t = re(&id["arithmetic_factor"]);
    assert_eq!(t, 1.0);
    assert!((re(&id["product"]) - t * re(&transform)).abs() <= 1e-15 * re(&transform).abs());
}

#[test]
fn skip_experimental_keeps_arithmetic_factors() {
    let out = gsp4(&["geometric-side", "--n", "1", "--N", "1", "--skip-experimental", "--budget", "4"]);
    assert_eq!(code(&out), 0);
    let rep = json_of(&out);
    let recs = rep["records"].as_array().unwrap();
    let others: Vec<&Value> = recs.iter().filter(|r| r["cell"] != "identity").collect();
    assert!(!others.is_empty());
    for r in &others {
        assert_eq!(r["experimental"], true);
        assert!(r["arch_value"].is_null());
        assert!(r["product"].is_null());
        assert!(r["arithmetic_factor"]["re"].is_number());
        assert!(r["diagnostics"]["class_count"].as_u64().unwrap() > 0);
    }
    for cell in ["J", "121", "212"] {
        assert!(others.iter().any(|r| r["cell"] == cell), "{cell}");
    }
}

#[test]
fn experimental_terms_are_evaluated_when_requested() {
    let out = gsp4(&["geometric-side", "--n", "1", "--N", "1", "--budget", "1"]);
    assert_eq!(code(&out), 0);
    let rep = json_of(&out);
    let j = rep["records"].as_array().unwrap().iter().find(|r| r["cell"] == "J").unwrap().clone();
    assert!(re(&j["arch_value"]).is_finite());
    assert_eq!(j["diagnostics"]["arch"]["dimension"], 4);
    let per_cell = rep["summary"]["per_cell"].as_array().unwrap();
    let jt = per_cell.iter().find(|c| c["cell"] == "J").unwrap();
    assert_eq!(jt["pending"], 0);
}

#[test]
fn k121_absent_for_non_square_ratio() {
    // n·m₁₂/m₂₂ = 2 is not a square.
    let out = gsp4(&["geometric-side", "--n", "2", "--N", "1", "--skip-experimental", "--budget", "8"]);
    assert_eq!(code(&out), 0);
    let rep = json_of(&out);
    assert_eq!(rep["summary"]["k121_present"], false);
    assert!(rep["records"].as_array().unwrap().iter().all(|r| r["cell"] != "121"));

    let out = gsp4(&["geometric-side", "--n", "2", "--N", "1", "--m1", "1,2", "--skip-experimental", "--budget", "8"]);
    let rep = json_of(&out);
    assert_eq!(rep["summary"]["k121_present"], true);
}

#[test]
fn geometric_side_rejects_non_coprime_levels() {
    assert_eq!(code(&gsp4(&["geometric-side", "--n", "2", "--N", "4"])), 2);
    assert_eq!(code(&gsp4(&["geometric-side", "--n", "2"])), 2);
}

#[test]
fn config_file_with_flag_overrides() {
    let path = tmp("run.toml");
    std::fs::write(
        &path,
        "n = 1\nN = 3\nm1 = [1, 1]\nm2 = [1, 1]\nbudget = 3\nskip_experimental = true\nvolume_normalization = 2.5\n\
         [omega]\nkind = \"prime_generator\"\nk = 1\n[h]\nname = \"gaussian\"\ntemperature = 2.0\n",
    )
    .unwrap();
    let out = gsp4(&["geometric-side", "--config", path.to_str().unwrap(), "--budget", "9"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = json_of(&out);
    assert_eq!(rep["volume_normalization"], 2.5);
    assert_eq!(rep["parameters"]["budget"], 9);
    assert_eq!(rep["parameters"]["N"], 3);
    assert_eq!(rep["summary"]["budget"], 9);

    std::fs::write(&path, "n = 1\nN = 1\nm1 = [1, 1]\nm2 = [1, 1]\ntypo = 1\n").unwrap();
    assert_eq!(code(&gsp4(&["geometric-side", "--config", path.to_str().unwrap()])), 2);
}

#[test]
fn output_is_deterministic_and_independent_of_threads() {
    let args = ["geometric-side", "--n", "1", "--N", "1", "--skip-experimental", "--budget", "6"];
    let a = gsp4(&args);
    let b = gsp4(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(gsp4(&seq).stdout, a.stdout);
}

#[test]
fn out_path_and_csv_format() {
    let path = tmp("sum.csv");
    let out = gsp4(&["sums", "classical", "--a", "1", "--b", "1", "--d", "5", "--N", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema_version=1");
    assert_eq!(lines[2], "# volume_normalization=1");
    let header: Vec<&str> = lines[4].split(',').collect();
    let row: Vec<&str> = lines[5].split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("s_closed.exact"), "-1");
    assert_eq!(col("s_bruteforce.provenance"), "bruteforce");
}

#[test]
fn selftest_passes() {
    let out = gsp4(&["selftest"]);
    assert_eq!(code(&out), 0);
    let rep = json_of(&out);
    assert_eq!(rep["summary"]["failed"], 0);
    let suites: std::collections::BTreeSet<String> =
        rep["records"].as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap().to_string()).collect();
    assert_eq!(suites.len(), 4);
}

#[test]
fn selftest_catches_injected_sign_flip() {
    let out = gsp4(&["selftest", "--only", "arith_sums", "--mutate-primepower-sign"]);
    assert_eq!(code(&out), 4);
    let rep = json_of(&out);
    assert_eq!(rep["status"], "invariant_failure");
    let closed = rep["records"].as_array().unwrap().iter().find(|r| r["invariant"] == "closed_form_vs_bruteforce").unwrap().clone();
    assert_eq!(closed["pass"], false);
}

#[test]
fn selftest_only_filters_suites() {
    let out = gsp4(&["selftest", "--only", "arch"]);
    assert_eq!(code(&out), 0);
    let rep = json_of(&out);
    let recs = rep["records"].as_array().unwrap();
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r["suite"] == "arch"));
    assert_eq!(code(&gsp4(&["selftest", "--only", "nope"])), 2);
}
