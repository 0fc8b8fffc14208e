//! Property self-test. Every suite drives exactly one engine operation and
//! checks it against local oracles, so a fault in one operation shows up in
//! one suite only.

use std::collections::BTreeSet;

use crate::engine::Engine;
use crate::report::Report;

pub mod fixtures;
mod gen;
mod oracle;
mod suites;

pub use suites::Sizes;

pub const DEFAULT_SEED: u64 = 0x0b0c_2024;

type Suite = fn(&dyn Engine, u64, Sizes) -> Vec<crate::report::Check>;

const TABLE: [(&str, Suite); 12] = [
    ("profile-law", suites::profile_law),
    ("euler-law", suites::euler_law),
    ("exchange-commutation", suites::exchange_commutation),
    ("normal-form", suites::normal_form),
    ("stabilization-bookkeeping", suites::stabilization_bookkeeping),
    ("hopf-relation", suites::hopf_relation),
    ("equalization", suites::equalization),
    ("common-page", suites::common_page),
    ("distinguish", suites::distinguish),
    ("homology", suites::homology),
    ("almost-canonical", suites::almost_canonical),
    ("round-trip", suites::round_trip),
];

/// Suite names in run order.
pub const SUITES: [&str; 12] = [
    "profile-law",
    "euler-law",
    "exchange-commutation",
    "normal-form",
    "stabilization-bookkeeping",
    "hopf-relation",
    "equalization",
    "common-page",
    "distinguish",
    "homology",
    "almost-canonical",
    "round-trip",
];

fn suite_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64 + 1)
}

pub fn run_selftest(engine: &dyn Engine, seed: Option<u64>) -> Report {
    run_selftest_sized(engine, seed, Sizes::FULL)
}

pub fn run_selftest_sized(engine: &dyn Engine, seed: Option<u64>, sizes: Sizes) -> Report {
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let mut report = Report::new("selftest");
    report.seeds.insert("base".to_owned(), seed);
    for (i, (name, suite)) in TABLE.iter().enumerate() {
        let s = suite_seed(seed, i);
        report.seeds.insert((*name).to_owned(), s);
        for check in suite(engine, s, sizes) {
            report.push(check);
        }
    }
    let failed = failed_suites(&report);
    report.result("suites", SUITES.len());
    report.result("failed_suites", failed);
    report.exit_status = report.status();
    report
}

/// Suites with at least one failing check.
pub fn failed_suites(report: &Report) -> BTreeSet<String> {
    report
        .failures()
        .filter_map(|c| c.name.split_once('/').map(|(s, _)| s.to_owned()))
        .collect()
}
