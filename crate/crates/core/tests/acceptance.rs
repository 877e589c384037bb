//! Acceptance battery: one test per criterion, one verdict line each.
//!
//! Lines are written straight to stdout so they show up without
//! `--nocapture`.

use std::io::Write;

use conebessel::report::VerificationReport;
use conebessel::suite::{run_criterion, SuiteConfig, CRITERIA};

const SEED: u64 = 7;

fn check(n: u32) {
    let reports: Vec<VerificationReport> = run_criterion(n, &SuiteConfig::new(SEED, false));
    let title = CRITERIA.iter().find(|(k, _)| *k == n).map(|(_, t)| *t).unwrap_or("?");
    let passed = reports.iter().filter(|r| r.pass).count();
    let ok = !reports.is_empty() && passed == reports.len();
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "criterion {n:>2} {}: {title} ({passed}/{} checks)",
        if ok { "PASS" } else { "FAIL" },
        reports.len()
    );
    for r in &reports {
        let _ = writeln!(out, "    {}", r.summary_line());
    }
    drop(out);
    assert!(ok, "criterion {n} failed");
}

#[test]
fn criterion_01_jack_normalization() {
    check(1);
}

#[test]
fn criterion_02_scalar_reduction() {
    check(2);
}

#[test]
fn criterion_03_product_formula() {
    check(3);
}

#[test]
fn criterion_04_multiplicativity() {
    check(4);
}

#[test]
fn criterion_05_wolf_haar() {
    check(5);
}

#[test]
fn criterion_06_harish_chandra_dunklchar() {
    check(6);
}

#[test]
fn criterion_07_exponential_limit_rate() {
    check(7);
}

#[test]
fn criterion_08_b_to_a_limit_rate() {
    check(8);
}

#[test]
fn criterion_09_laplace() {
    check(9);
}

#[test]
fn criterion_10_addition() {
    check(10);
}

#[test]
fn criterion_11_sonine() {
    check(11);
}

#[test]
fn criterion_12_polar_route() {
    check(12);
}

#[test]
fn criterion_13_beta_projection() {
    check(13);
}

#[test]
fn criterion_14_q2_example() {
    check(14);
}

#[test]
fn criterion_15_psi_functional_equation() {
    check(15);
}
