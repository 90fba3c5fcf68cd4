//! Acceptance gate: every advertised identity family, checked exactly at
//! its full advertised scope over the bundled data.  Each test prints one
//! pass/fail line (visible with `--nocapture`) and asserts the outcome.

use qtetra_cli::data::DataSet;
use qtetra_cli::suites::{run_suite, SuiteConfig};

fn run(suite: &str) {
    let data = DataSet::bundled();
    let cfg = SuiteConfig { data: &data, quiver: None };
    let report = run_suite(suite, &cfg).expect("acceptance suites exist");
    println!(
        "{} {} ({:.3}s): {}",
        if report.passed { "PASS" } else { "FAIL" },
        report.name,
        report.seconds,
        report.detail
    );
    assert!(report.passed, "{}: {}", report.name, report.detail);
}

#[test]
fn criterion_01_q_combinatorics() {
    run("coeff");
}

#[test]
fn criterion_02_shuffle_serre() {
    run("serre");
}

#[test]
fn criterion_03_shuffle_associativity_and_bialgebra() {
    run("shuffle");
}

#[test]
fn criterion_04_divided_powers() {
    run("divided-powers");
}

#[test]
fn criterion_05_word_map_homomorphism() {
    run("feigin");
}

#[test]
fn criterion_06_hall_associativity_and_green_compatibility() {
    run("hall");
    run("green");
}

#[test]
fn criterion_07_omega_twisted_bialgebra() {
    run("omega");
}

#[test]
fn criterion_08_tetrahedron() {
    run("tetrahedron");
}

#[test]
fn criterion_09_counting_polynomial_independence() {
    run("interpolation");
}

#[test]
fn criterion_10_klr_character_example() {
    run("klr-example");
}

#[test]
fn criterion_11_cluster_character_identification() {
    run("cluster-id");
}

#[test]
fn criterion_12_laurent_phenomenon() {
    run("laurent");
}
