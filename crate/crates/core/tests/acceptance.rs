//! The acceptance campaign: one test per criterion, each printing a
//! pass/fail line. Every check is exact; the two stated wall-clock budgets
//! are asserted.

use cdo_core::report::SuiteReport;
use cdo_core::selftest as st;
use std::time::Instant;

const SEED: u64 = 2024;

fn run(name: &str, f: fn(u64) -> SuiteReport, budget_secs: Option<u64>) {
    let t = Instant::now();
    let suite = f(SEED);
    let elapsed = t.elapsed();
    let status = if suite.all_passed() { "PASS" } else { "FAIL" };
    println!("[{status}] criterion {name} ({} checks, {elapsed:.2?})", suite.checks.len());
    if let Some(fail) = suite.first_failure() {
        println!("{suite}");
        panic!("criterion {name} failed: {fail}");
    }
    if let Some(budget) = budget_secs {
        assert!(
            elapsed.as_secs() < budget,
            "criterion {name} exceeded its {budget}s budget: {elapsed:?}"
        );
    }
}

#[test]
fn criterion_01_vertex_algebroid_axioms() {
    run("1 (coordinate axioms)", st::criterion_axioms, Some(60));
}

#[test]
fn criterion_02_conformal_structure() {
    run("2 (conformal structure)", st::criterion_conformal, None);
}

#[test]
fn criterion_03_mode_commutator() {
    run("3 (mode commutator)", st::criterion_borcherds, None);
}

#[test]
fn criterion_04_coordinate_change() {
    run("4 (coordinate change)", st::criterion_coordinate_change, None);
}

#[test]
fn criterion_05_global_recipe() {
    run("5 (connection-based structures)", st::criterion_global_recipe, None);
}

#[test]
fn criterion_06_classification() {
    run("6 (two-form classification)", st::criterion_classification, None);
}

#[test]
fn criterion_07_chern_simons() {
    run("7 (Chern-Simons transgression)", st::criterion_chern_simons, None);
}

#[test]
fn criterion_08_bundle_charts() {
    run("8 (bundle-chart calculus)", st::criterion_bundle_charts, None);
}

#[test]
fn criterion_09_chiral_dolbeault() {
    run("9 (lifted differential)", st::criterion_chiral_dolbeault, None);
}

#[test]
fn criterion_10_genus_suite() {
    run("10 (characters)", st::criterion_genus, Some(120));
}

#[test]
fn criterion_11_character_count() {
    run("11 (filtration character)", st::criterion_character_count, None);
}

#[test]
fn criterion_12_determinism() {
    let t = Instant::now();
    let a = st::transcript(SEED);
    let b = st::transcript(SEED);
    let status = if a == b && a.contains("overall: PASS") { "PASS" } else { "FAIL" };
    println!("[{status}] criterion 12 (deterministic selftest, {:.2?})", t.elapsed());
    assert!(a.contains("overall: PASS"), "selftest reported failures:\n{a}");
    assert_eq!(a, b, "selftest transcript is not reproducible");
}
