//! Named example documents. The JSON files shipped in `fixtures/` are the
//! canonical serializations of these.

use crate::calculus::{pad, stabilize_k, OpenBookDoc};
use crate::document::Document;
use crate::handle::{Handle, HandleDecomposition};
use crate::monodromy::MonodromySpec;
use crate::profile::Profile;

fn natural(n: usize, mu: &[u64]) -> OpenBookDoc {
    OpenBookDoc::natural(&Profile::new(n, mu.to_vec()).expect("fixture profile"))
}

pub fn annulus() -> OpenBookDoc {
    let page = HandleDecomposition::disk(2).with_handle(Handle::new("h1", 1, true));
    OpenBookDoc::trivial(3, page).expect("valid")
}

/// The annulus with a Dehn twist as monodromy.
pub fn dehn_annulus() -> OpenBookDoc {
    let page = HandleDecomposition::disk(2).with_handle(Handle::new("h1", 1, false));
    OpenBookDoc::new(3, page, MonodromySpec::annotated(Some("tau".to_owned()))).expect("valid")
}

pub fn d4() -> OpenBookDoc {
    natural(5, &[0, 0, 0])
}

pub fn s2_x_d2() -> OpenBookDoc {
    natural(5, &[0, 1, 0])
}

pub fn s3_x_d1() -> OpenBookDoc {
    natural(5, &[0, 0, 1])
}

/// The closed decomposition of `S^3` with handle counts `(1, 1, 1, 1)`.
pub fn hopf_sphere() -> OpenBookDoc {
    let h = HandleDecomposition::new(3, false)
        .with_handle(Handle::new("h0", 0, true))
        .with_handle(Handle::new("h1", 1, true))
        .with_handle(Handle::new("h2", 2, true))
        .with_handle(Handle::new("h3", 3, true))
        .with_dependency("h2", "h1")
        .with_incidence("h2", "h1", 1);
    OpenBookDoc::trivial(4, h).expect("valid")
}

/// `D^4` with a canceling `(2, 3)` pair.
pub fn padded_d4() -> OpenBookDoc {
    pad(&d4(), 2).expect("pad in range").0
}

pub fn barbell() -> OpenBookDoc {
    stabilize_k(&d4(), 2).expect("k in range").0
}

/// A page with geometric-only dependencies and mixed flags.
pub fn mixed() -> OpenBookDoc {
    let h = HandleDecomposition::disk(5)
        .with_handle(Handle::new("a", 1, true))
        .with_handle(Handle::new("b", 2, true).with_boundary("B0"))
        .with_handle(Handle::new("c", 2, false))
        .with_handle(Handle::new("d", 3, true))
        .with_handle(Handle::new("e", 4, true))
        .with_dependency("d", "b")
        .with_dependency("e", "d")
        .with_dependency("c", "a")
        .with_incidence("d", "b", -1);
    OpenBookDoc::new(6, h, MonodromySpec::annotated(None)).expect("valid")
}

/// `D^4` after a logged 3-stabilization.
pub fn stabilized_d4_with_history() -> Document {
    let (out, log) = stabilize_k(&d4(), 3).expect("k in range");
    Document::new(d4()).advanced(out, log)
}

/// Every fixture with its file stem.
pub fn all() -> Vec<(&'static str, Document)> {
    vec![
        ("annulus", Document::new(annulus())),
        ("dehn_annulus", Document::new(dehn_annulus())),
        ("d4", Document::new(d4())),
        ("s2xd2", Document::new(s2_x_d2())),
        ("s3xd1", Document::new(s3_x_d1())),
        ("hopf_sphere", Document::new(hopf_sphere())),
        ("padded_d4", Document::new(padded_d4())),
        ("barbell", Document::new(barbell())),
        ("mixed", Document::new(mixed())),
        ("natural_312", Document::new(natural(5, &[3, 1, 2]))),
        ("stabilized_d4", stabilized_d4_with_history()),
    ]
}
