use std::path::PathBuf;

use openbook::calculus::{induce_open_book, MoveLog};
use openbook::document::{parse_document, serialize_document, UnknownFields};
use openbook::selftest::fixtures;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Set `OPENBOOK_BLESS=1` to rewrite the files.
#[test]
fn shipped_files_are_canonical() {
    let bless = std::env::var_os("OPENBOOK_BLESS").is_some();
    for (stem, doc) in fixtures::all() {
        let path = dir().join(format!("{stem}.json"));
        let text = serialize_document(&doc);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{stem}");
        let parsed = parse_document(&on_disk, UnknownFields::Reject).unwrap();
        assert_eq!(parsed.document, doc);
        assert!(parsed.warnings.is_empty());
    }
}

#[test]
fn fixture_profiles() {
    let mu = |d: &openbook::calculus::OpenBookDoc| d.profile().unwrap().counts().to_vec();
    assert_eq!(mu(&fixtures::d4()), vec![0, 0, 0]);
    assert_eq!(mu(&fixtures::barbell()), vec![1, 0, 1]);
    assert_eq!(mu(&fixtures::padded_d4()), vec![0, 1, 1]);
    assert_eq!(mu(&fixtures::annulus()), vec![1]);
    let ob = induce_open_book(&fixtures::annulus()).unwrap();
    assert_eq!(ob.profile.counts(), &[1, 1, 1, 1]);
}

#[test]
fn history_replays_to_the_page() {
    let doc = fixtures::stabilized_d4_with_history();
    let log: &MoveLog = doc.history.as_ref().unwrap();
    assert_eq!(log.len(), 1);
    let end = log.replay(5, &[1, 0, 0, 0, 0]).unwrap();
    assert_eq!(end, doc.open_book.page().counts());
}
