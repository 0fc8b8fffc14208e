use std::collections::BTreeSet;

use openbook::engine::{Mutant, Mutation, Reference};
use openbook::selftest::{failed_suites, run_selftest, DEFAULT_SEED, SUITES};

#[test]
fn reference_passes_every_suite() {
    let report = run_selftest(&Reference, None);
    let failures: Vec<_> = report.failures().map(|c| format!("{}: {}", c.name, c.actual)).collect();
    assert!(failures.is_empty(), "{failures:#?}");
    assert_eq!(report.exit_status, 0);
    assert_eq!(report.seeds["base"], DEFAULT_SEED);
    assert_eq!(report.seeds.len(), SUITES.len() + 1);
}

#[test]
fn each_mutant_fails_exactly_its_suite() {
    for m in Mutation::ALL {
        let report = run_selftest(&Mutant(m), None);
        let expected: BTreeSet<String> = [m.suite().to_owned()].into();
        assert_eq!(failed_suites(&report), expected, "mutant {}", m.name());
        assert_eq!(report.exit_status, 1);
    }
}

#[test]
fn other_seeds_pass_too() {
    for seed in [1, 2, 99] {
        let report = run_selftest(&Reference, Some(seed));
        assert!(report.passed(), "seed {seed}: {:?}", report.failures().collect::<Vec<_>>());
    }
}
