use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conebessel"))
        .args(args)
        .env_remove("CONEBESSEL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn leading_number(o: &Output) -> f64 {
    stdout(o).split_whitespace().next().expect("some output").parse().expect("a number")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON report on stdout")
}

#[test]
fn eval_scalar_bessel() {
    let o = run(&["eval", "--fn", "bessel", "--q", "1", "--field", "R", "--mu", "1", "--x", "1"]);
    assert_eq!(code(&o), 0);
    assert!((leading_number(&o) - 0.2238907791).abs() < 1e-9, "{}", stdout(&o));
}

#[test]
fn eval_psi_at_zero_b() {
    let o = run(&["eval", "--fn", "psi", "--q", "2", "--field", "R", "--b", "0,0", "--a", "1,1"]);
    assert_eq!(code(&o), 0);
    assert!((leading_number(&o) - 1.0).abs() < 1e-12);
}

#[test]
fn eval_gamma_omega() {
    let o = run(&["eval", "--fn", "gamma-omega", "--q", "2", "--field", "R", "--mu", "2"]);
    assert_eq!(code(&o), 0);
    // sqrt(pi) Gamma(2) Gamma(3/2) = pi / sqrt(2)
    assert!((leading_number(&o) - std::f64::consts::PI / 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn eval_json_has_schema() {
    let o = run(&["eval", "--fn", "bessel", "--mu", "1", "--x", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
}

#[test]
fn verify_sonine_at_zero() {
    let o = run(&["verify", "--identity", "sonine", "--q", "1", "--mu", "1", "--nu", "1", "--m", "0"]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["schema"], 1);
    assert!(v["abs_err"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_product_formula_scalar() {
    let o = run(&[
        "verify", "--identity", "product-formula", "--q", "1", "--field", "R", "--mu", "3", "--r", "1", "--s", "1", "--samples",
        "1000000", "--seed", "7",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = report(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 7);
    assert!(v["mc_stderr"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_beta_projection() {
    let o = run(&[
        "verify", "--identity", "beta-projection", "--ptilde", "2", "--q", "1", "--field", "R", "--p", "3", "--r", "3", "--samples",
        "200000", "--seed", "1",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(report(&o)["pass"], true);
}

#[test]
fn boundary_mu_is_a_domain_error() {
    let o = run(&[
        "verify", "--identity", "product-formula", "--q", "2", "--field", "C", "--mu", "3", "--r", "1,0.5", "--s", "0.8,0.3",
        "--samples", "1000",
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("boundary"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["eval", "--bogus"])), 2);
    assert_eq!(code(&run(&["verify", "--identity", "nope"])), 2);
    assert_eq!(code(&run(&["eval", "--fn", "bessel", "--mu", "abc", "--x", "1"])), 2);
}

#[test]
fn verify_list_names_every_identity() {
    let o = run(&["verify", "--list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for id in ["product-formula", "sonine-phi", "polar-route", "beta-projection", "example-q2"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
}

#[test]
fn reports_are_reproducible_without_timestamp() {
    let args = [
        "verify", "--identity", "multiplicativity", "--q", "1", "--mu", "2", "--s", "1", "--r", "0.7", "--t", "1.3",
        "--samples", "50000", "--seed", "11", "--no-timestamp",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(report(&a).get("wall_time_ms").is_none_or(Value::is_null));
}

#[test]
fn thread_count_does_not_change_results() {
    let base = ["verify", "--identity", "wolf-haar", "--samples", "20000", "--seed", "5", "--no-timestamp"];
    let one: Vec<&str> = ["--threads", "1"].iter().copied().chain(base).collect();
    let four: Vec<&str> = ["--threads", "4"].iter().copied().chain(base).collect();
    let (a, b) = (run(&one), run(&four));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sample_csv_shape() {
    let o = run(&["sample", "--dist", "wishart", "--q", "2", "--field", "C", "--p", "3", "--n", "5", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines[1].split(',').count(), 8);
    assert!(lines[1].starts_with("m11_re,m11_im"));
    assert_eq!(lines.len(), 2 + 5);
    let again = run(&["sample", "--dist", "wishart", "--q", "2", "--field", "C", "--p", "3", "--n", "5", "--seed", "1"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn matrix_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let y = dir.path().join("y.txt");
    fs::write(&y, "# y\n2 0.5\n0.5 1\n").unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "identity = laplace\nq = 2\nmu = 2\nno-timestamp = true\n").unwrap();
    let o = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--matrix-file",
        &format!("y={}", y.display()),
    ]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let v = report(&o);
    assert_eq!(v["identity"], "laplace");
    assert_eq!(v["pass"], true);
}

#[test]
fn quick_suite_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    let o = run(&["suite", "--quick", "--seed", "42", "--no-timestamp", "--json", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    let reports = v["reports"].as_array().unwrap();
    let ids: std::collections::BTreeSet<&str> = reports.iter().filter_map(|r| r["identity"].as_str()).collect();
    for id in ["product-formula", "wolf-haar", "laplace", "sonine-phi", "polar-route", "beta-projection", "example-q2"] {
        assert!(ids.contains(id), "{id} missing");
    }
    let failed = v["failed"].as_u64().unwrap();
    assert_eq!(code(&o), if failed == 0 { 0 } else { 1 });
}
