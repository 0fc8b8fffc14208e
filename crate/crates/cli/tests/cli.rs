use std::path::{Path, PathBuf};

use openbook::calculus::{self, CalculusError, Move, MoveLog, MoveRecord, OpenBookDoc};
use openbook::document::{parse_document, UnknownFields};
use openbook::engine::{Engine, Mutant, Mutation};
use openbook_cli::{run, run_with_engine, Outcome, EXIT_DOMAIN, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn fixture(stem: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{stem}.json"));
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("openbook").chain(args.iter().copied()))
}

fn machine(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn induce_annulus() {
    let out = cli(&["induce", &fixture("annulus"), "--machine"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let r = machine(&out.stdout);
    assert_eq!(r["results"]["closed_profile"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn stabilize_d4_logs_chi() {
    let out = cli(&["stabilize", "--k", "3", &fixture("d4"), "--machine"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let report = machine(&out.stderr);
    assert_eq!(report["results"]["profile_after"], serde_json::json!([0, 2, 0]));
    assert_eq!(report["results"]["chi_before"], 1);
    assert_eq!(report["results"]["chi_after"], 3);
    let doc = parse_document(&out.stdout, UnknownFields::Reject).unwrap().document;
    let log = doc.history.unwrap();
    assert_eq!(log.len(), 1);
    assert_eq!(log.records()[0].action, Move::StabilizeK { k: 3 });
}

#[test]
fn history_accumulates_across_commands() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let out = cli(&["pad", &fixture("d4"), "--j", "1", "--out", first.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let out = cli(&["pad-exchange", first.to_str().unwrap(), "--j", "2"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let doc = parse_document(&out.stdout, UnknownFields::Reject).unwrap().document;
    let log = doc.history.unwrap();
    let kinds: Vec<_> = log.records().iter().map(|r| r.action.to_string()).collect();
    assert_eq!(log.len(), 3, "{kinds:?}");
    assert_eq!(log.replay(5, &[1, 0, 0, 0, 0]).unwrap(), doc.open_book.page().counts());
    let out = cli(&["validate", write(dir.path(), "b.json", &serde_json_text(&doc.open_book, &log)).as_str()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
}

fn serde_json_text(ob: &OpenBookDoc, log: &MoveLog) -> String {
    let d = openbook::document::Document { open_book: ob.clone(), history: Some(log.clone()) };
    openbook::document::serialize_document(&d)
}

#[test]
fn distinguish_examples() {
    let out = cli(&["distinguish", "--n", "5", "--k", "2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("witness_degree: 1"), "{}", out.stdout);
    assert!(out.stdout.contains("PASS distinct"));
    let out = cli(&["distinguish", "--n", "6", "--k", "3", "--sign", "-1", "--machine"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(machine(&out.stdout)["results"]["witness_degree"], 2);
}

#[test]
fn homology_targets() {
    let out = cli(&["homology", &fixture("hopf_sphere"), "--page"]);
    assert!(out.stdout.contains("H_0 = Z, H_1 = 0, H_2 = 0, H_3 = Z"), "{}", out.stdout);
    let out = cli(&["homology", &fixture("annulus"), "--double"]);
    assert!(out.stdout.contains("H_0 = Z, H_1 = Z^2, H_2 = Z"), "{}", out.stdout);
    let out = cli(&["homology", &fixture("s2xd2"), "--open-book", "--machine"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(machine(&out.stdout)["results"]["euler_characteristic"], 0);
    let out = cli(&["homology", &fixture("dehn_annulus"), "--open-book"]);
    assert_eq!(out.code, EXIT_DOMAIN);
}

#[test]
fn profile_euler_and_validate() {
    let out = cli(&["profile", &fixture("natural_312"), "--machine"]);
    let r = machine(&out.stdout);
    assert_eq!(r["results"]["profile"], serde_json::json!([3, 1, 2]));
    assert_eq!(r["results"]["chi"], 1 - 3 + 1 - 2);
    let out = cli(&["euler", &fixture("s2xd2"), "--machine"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(machine(&out.stdout)["results"]["chi_open_book"], 0);
    for (stem, _) in openbook::selftest::fixtures::all() {
        assert_eq!(cli(&["validate", &fixture(stem)]).code, EXIT_OK, "{stem}");
    }
}

#[test]
fn two_input_commands() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &openbook::document::serialize_document(&doc(5, &[2, 1, 0])));
    let b = write(dir.path(), "b.json", &openbook::document::serialize_document(&doc(5, &[1, 0, 0])));
    let out = cli(&["equalize", &a, &b, "--machine"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(machine(&out.stderr)["results"]["common_profile"], serde_json::json!([2, 1, 0]));
    let pair = machine(&out.stdout);
    for side in ["left", "right"] {
        let text = serde_json::to_string(&pair[side]).unwrap();
        let d = parse_document(&text, UnknownFields::Reject).unwrap().document;
        assert_eq!(d.open_book.profile().unwrap().counts(), &[2, 1, 0]);
    }
    let out = cli(&["common-page", &a, &b]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let c = write(dir.path(), "c.json", &openbook::document::serialize_document(&doc(5, &[0, 0, 0])));
    let out = cli(&["common-page", &a, &c]);
    assert_eq!(out.code, EXIT_DOMAIN);
    assert!(out.stderr.contains("parity condition violated"), "{}", out.stderr);
}

fn doc(n: usize, mu: &[u64]) -> openbook::document::Document {
    let p = openbook::profile::Profile::new(n, mu.to_vec()).unwrap();
    openbook::document::Document::new(OpenBookDoc::natural(&p))
}

#[test]
fn exchange_and_normal_form() {
    let out = cli(&["exchange", &fixture("s3xd1"), "--select", "h3_1", "--machine"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(machine(&out.stderr)["results"]["profile_after"], serde_json::json!([0, 1, 0]));
    let out = cli(&["normal-form", &fixture("natural_312"), "--machine"]);
    assert_eq!(machine(&out.stderr)["results"]["profile_after"], serde_json::json!([3, 2, 1]));
    let out = cli(&["stabilize", &fixture("annulus"), "--middle"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
}

#[test]
fn lenient_flag_controls_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("d4")).unwrap().replacen("\"n\": 5", "\"n\": 5,\n  \"color\": \"red\"", 1);
    let f = write(dir.path(), "x.json", &text);
    let strict = cli(&["validate", &f]);
    assert_eq!(strict.code, EXIT_DOMAIN);
    assert!(strict.stderr.contains("color"), "{}", strict.stderr);
    let lenient = cli(&["validate", &f, "--lenient"]);
    assert_eq!(lenient.code, EXIT_OK);
    assert!(lenient.stdout.contains("warning"), "{}", lenient.stdout);
}

#[test]
fn exit_code_success() {
    assert_eq!(cli(&["validate", &fixture("annulus")]).code, EXIT_OK);
    let help = cli(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("common-page"));
}

#[test]
fn exit_code_domain_failures() {
    let dir = tempfile::tempdir().unwrap();
    let dup = std::fs::read_to_string(fixture("annulus")).unwrap().replace("\"h1\"", "\"h0\"");
    let cases: Vec<Vec<String>> = vec![
        vec!["validate".into(), write(dir.path(), "dup.json", &dup)],
        vec!["validate".into(), write(dir.path(), "bad.json", "{ not json")],
        vec!["stabilize".into(), fixture("d4"), "--k".into(), "9".into()],
        vec!["stabilize".into(), fixture("mixed"), "--middle".into()],
        vec!["pad".into(), fixture("d4"), "--j".into(), "7".into()],
        vec!["cancel".into(), fixture("d4"), "--pair".into(), "h0,zz".into()],
        vec!["exchange".into(), fixture("mixed"), "--select".into(), "b".into()],
        vec!["exchange".into(), fixture("d4"), "--select".into(), "nope".into()],
        vec!["normal-form".into(), fixture("dehn_annulus")],
        vec!["distinguish".into(), "--n".into(), "5".into(), "--k".into(), "3".into()],
        vec!["profile".into(), fixture("hopf_sphere")],
    ];
    for args in cases {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = cli(&a);
        assert_eq!(out.code, EXIT_DOMAIN, "{args:?}: {} {}", out.stdout, out.stderr);
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let dup_report = cli(&["validate", &dir.path().join("dup.json").to_string_lossy()]);
    assert!(dup_report.stderr.contains("duplicate id"), "{}", dup_report.stderr);
}

#[test]
fn exit_code_usage() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["stabilize", "x.json"],
        &["stabilize", "x.json", "--k", "2", "--middle"],
        &["homology", "x.json"],
        &["homology", "x.json", "--page", "--double"],
        &["distinguish", "--n", "5"],
        &["distinguish", "--n", "5", "--k", "2", "--sign", "2"],
        &["exchange", "x.json"],
        &["selftest", "--seed", "abc"],
        &["validate", "/nonexistent/doc.json"],
        &["equalize", "only-one.json"],
    ];
    for args in cases {
        let out = cli(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {}", out.stderr);
        assert!(!out.stderr.is_empty());
    }
    let out = cli(&["cancel", &fixture("padded_d4"), "--pair", "a,b,c"]);
    assert_eq!(out.code, EXIT_USAGE, "{}", out.stderr);
}

/// Claims a stabilization but logs the wrong counts.
struct Liar;

impl Engine for Liar {
    fn stabilize_k(&self, doc: &OpenBookDoc, k: usize) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
        let (out, _) = calculus::stabilize_k(doc, k)?;
        let c = doc.page().counts();
        Ok((out, MoveLog::single(MoveRecord::from_counts(Move::StabilizeK { k }, c.clone(), c))))
    }
}

#[test]
fn exit_code_internal() {
    let out = run_with_engine(["openbook", "stabilize", &fixture("d4"), "--k", "2"], &Liar);
    assert_eq!(out.code, EXIT_INTERNAL, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("internal invariant breach"));
    let machine_out = run_with_engine(["openbook", "stabilize", &fixture("d4"), "--k", "2", "--machine"], &Liar);
    assert_eq!(machine(&machine_out.stderr)["exit_status"], EXIT_INTERNAL);
}

#[test]
fn selftest_passes_and_catches_mutants() {
    let out = cli(&["selftest", "--machine"]);
    assert_eq!(out.code, EXIT_OK);
    let r = machine(&out.stdout);
    assert_eq!(r["exit_status"], 0);
    assert_eq!(r["seeds"]["base"], openbook::selftest::DEFAULT_SEED);
    let out = run_with_engine(["openbook", "selftest", "--seed", "7"], &Mutant(Mutation::TauSwapsDegrees));
    assert_eq!(out.code, EXIT_DOMAIN);
    assert!(out.stdout.contains("FAIL distinguish/"));
    assert!(!out.stdout.contains("FAIL homology/"));
}
