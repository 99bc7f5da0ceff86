//! Acceptance criteria AC1 to AC11, one test each.

use qsense::verify::{self, Check};

fn report(check: Check) {
    println!("{}", check.line());
    assert!(check.passed, "{}", check.line());
}

#[test]
fn ac01_polygamma() {
    report(verify::ac1());
}

#[test]
fn ac02_rate_pipeline_matches_closed_form() {
    report(verify::ac2());
}

#[test]
fn ac03_rate_asymptotics() {
    report(verify::ac3());
}

#[test]
fn ac04_coherence_qfi() {
    report(verify::ac4());
}

#[test]
fn ac05_coherence_povm_is_computational_basis() {
    report(verify::ac5());
}

#[test]
fn ac06_coherence_intrinsic_gain_sweep() {
    report(verify::ac6());
}

#[test]
fn ac07_coherence_nsr_statistics() {
    report(verify::ac7());
}

#[test]
fn ac08_lifetime_minimum_losses() {
    report(verify::ac8());
}

#[test]
fn ac09_lifetime_nsr_statistics() {
    report(verify::ac9());
}

#[test]
fn ac10_optimal_probe_is_excited_state() {
    report(verify::ac10());
}

#[test]
fn ac11_property_suite() {
    report(verify::ac11());
}
