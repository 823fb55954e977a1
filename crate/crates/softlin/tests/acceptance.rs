//! Acceptance suite: runs each criterion of the built-in battery at its
//! stated sample counts and tolerances, printing one pass/fail line per
//! criterion. The same battery backs the CLI `selftest` verb.

use softlin::selftest::{run_criterion, CriterionOutcome};

const SEED: u64 = 0;

fn check(index: u8) {
    let CriterionOutcome {
        name,
        passed,
        detail,
        elapsed,
        ..
    } = run_criterion(index, SEED);
    let status = if passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {index:>2} {name:<24} {status}  ({:.2}s)  {detail}",
        elapsed.as_secs_f64()
    );
    assert!(passed, "criterion {index} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_norm_axioms() {
    check(1);
}

#[test]
fn criterion_02_de_morgan_set_algebra() {
    check(2);
}

#[test]
fn criterion_03_independence_reduction() {
    check(3);
}

#[test]
fn criterion_04_null_vector_theorems() {
    check(4);
}

#[test]
fn criterion_05_induced_metric() {
    check(5);
}

#[test]
fn criterion_06_independence_constant() {
    check(6);
}

#[test]
fn criterion_07_equivalence_constants() {
    check(7);
}

#[test]
fn criterion_08_riesz_witness() {
    check(8);
}

#[test]
fn criterion_09_completeness_replay() {
    check(9);
}

#[test]
fn criterion_10_limit_algebra() {
    check(10);
}

#[test]
fn criterion_11_convexity() {
    check(11);
}
