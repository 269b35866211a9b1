use std::process::{Command, Output};

use serde_json::Value;

fn wigner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wigner")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = wigner(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("single JSON object")
}

fn csv_rows(args: &[&str]) -> Vec<Vec<String>> {
    let mut full = args.to_vec();
    full.extend(["--format", "csv"]);
    let out = wigner(&full);
    assert!(out.status.success());
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn asymptotic_three_particles() {
    let v = json(&["asymptotic", "--n", "3", "--d", "1"]);
    let sites = v["result"]["sites"].as_array().unwrap();
    assert!((sites[0]["lambda0"].as_f64().unwrap() - 0.324905).abs() < 1e-6);
    assert!((sites[1]["lambda0"].as_f64().unwrap() - 0.319336).abs() < 1e-6);
    assert_eq!(v["config"]["subcommand"], "asymptotic");
    assert_eq!(v["config"]["n"], 3);
}

#[test]
fn asymptotic_two_particles_entropy() {
    let v = json(&["asymptotic", "--n", "2", "--d", "1"]);
    assert!((v["result"]["s_total_bits"].as_f64().unwrap() - 1.136_179_54).abs() < 1e-7);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wigner(&["asymptotic", "--n", "1", "--d", "1"]).status.code(), Some(2));
    assert_eq!(wigner(&["asymptotic", "--n", "3", "--d", "-1"]).status.code(), Some(2));
    assert_eq!(wigner(&["sweep", "--n-max", "25"]).status.code(), Some(2));
    assert_eq!(wigner(&["finite", "--n", "3"]).status.code(), Some(2));
    assert_eq!(wigner(&["magic-g", "--n", "0"]).status.code(), Some(2));
    assert_eq!(wigner(&["modes", "--n", "3", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn unsupported_exponent_exits_4() {
    let out = wigner(&["finite", "--n", "3", "--d", "3", "--g", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweep_is_monotone_and_dipoles_are_more_entangled() {
    let s = |d: &str| -> Vec<f64> {
        csv_rows(&["sweep", "--d", d, "--n-max", "6"]).iter().map(|r| r[1].parse().unwrap()).collect()
    };
    let (s1, s3) = (s("1"), s("3"));
    assert_eq!(s1.len(), 5);
    assert!(s1.windows(2).all(|w| w[1] > w[0]));
    assert!(s1.iter().zip(&s3).all(|(a, b)| b > a));

    let single = csv_rows(&["sweep", "--d", "1", "--n-max", "2"]);
    assert_eq!(single.len(), 1);
    let direct = json(&["asymptotic", "--n", "2", "--d", "1"]);
    assert_eq!(single[0][1].parse::<f64>().unwrap(), direct["result"]["s_total_bits"].as_f64().unwrap());
}

#[test]
fn magic_strengths() {
    let g = |n: &str| json(&["magic-g", "--n", n])["result"]["g_magic"].as_f64().unwrap();
    assert!((g("1") - 2f64.sqrt()).abs() < 1e-12);
    assert!((g("3") - 5.2316).abs() < 1e-4);
    assert!((g("10") - 26.640).abs() < 1e-3);
    let coeffs = json(&["magic-g", "--n", "1"])["result"]["coeffs"].clone();
    assert_eq!(coeffs, serde_json::json!([1.0, 1.0]));
}

#[test]
fn finite_magic_pair_uses_exact_factor() {
    let v = json(&["finite", "--n", "2", "--magic-n", "1"]);
    assert!((v["result"]["g"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["result"]["factor"], "magic-series");
    assert_eq!(v["config"]["effective"]["grid"]["dy"], 0.25);
    assert_eq!(v["config"]["seed"], 20_240_901);
}

#[test]
fn finite_three_particles_table_value() {
    let v = json(&["finite", "--n", "3", "--g", "2"]);
    let l = v["result"]["linear_entropy"].as_f64().unwrap();
    assert!((l - 0.616).abs() < 0.005, "{l}");
}

#[test]
fn monte_carlo_runs_are_reproducible() {
    let args = ["finite", "--n", "4", "--magic-n", "1", "--samples", "400000", "--seed", "5", "--format", "json"];
    let a = wigner(&args);
    let b = wigner(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("modes.csv");
    let out = wigner(&["modes", "--n", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("mode,omega_sq,parity,u_1,u_2,u_3,u_4\n"));
    assert_eq!(text.lines().count(), 5);
    // CSV keeps the configuration out of the table
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"subcommand\":\"modes\""));
}

#[test]
fn text_output_echoes_config() {
    let out = wigner(&["equilibrium", "--n", "2", "--g", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("config:\n"));
    assert!(text.contains("subcommand = \"equilibrium\""));
    assert!(text.contains("potential: 1.1905507889761"));
}
