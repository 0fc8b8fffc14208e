//! Browser bindings. Every export returns a JSON string; failures come back
//! as `{"error": "..."}` so the page never has to catch.

use openbook::calculus::{common_page, induce_open_book, open_book_euler, CalculusError, OpenBookDoc};
use openbook::homology::distinguish_monodromies;
use openbook::profile::Profile;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn parse_counts(text: &str) -> Result<Vec<u64>, String> {
    text.split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("not a handle count: {s:?}")))
        .collect()
}

fn profile(n: usize, counts: &str) -> Result<Profile, String> {
    Profile::new(n, parse_counts(counts)?).map_err(|e| e.to_string())
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Closed handle counts of the open book with a natural page.
#[wasm_bindgen]
pub fn induce(n: usize, counts: &str) -> String {
    respond(profile(n, counts).and_then(|p| {
        let ob = induce_open_book(&OpenBookDoc::natural(&p)).map_err(|e| e.to_string())?;
        Ok(json!({
            "page": p.counts(),
            "closed": ob.profile.counts(),
            "chi_page": p.euler_characteristic(),
            "chi_open_book": open_book_euler(&p),
        }))
    }))
}

/// Moves that take two natural pages to a common page.
#[wasm_bindgen]
pub fn common(n: usize, left: &str, right: &str) -> String {
    respond((|| {
        let (a, b) = (profile(n, left)?, profile(n, right)?);
        let c = common_page(&OpenBookDoc::natural(&a), &OpenBookDoc::natural(&b)).map_err(|e: CalculusError| e.to_string())?;
        let moves = |log: &openbook::calculus::MoveLog| -> Vec<String> {
            log.records().iter().map(|r| format!("{}: {:?} -> {:?}", r.action, r.counts_before, r.counts_after)).collect()
        };
        Ok(json!({
            "profile": c.profile.counts(),
            "left": moves(&c.left_log),
            "right": moves(&c.right_log),
        }))
    })())
}

/// Compares tau_k with tau_{n-k+1} on the homology of the double.
#[wasm_bindgen]
pub fn distinguish(n: usize, k: usize, sign: i32) -> String {
    respond(distinguish_monodromies(n, k, i64::from(sign)).map_err(|e| e.to_string()).map(|d| {
        let rows = |ts: &[openbook::homology::TauAction]| -> Vec<Value> {
            ts.iter().map(|t| json!({ "degree": t.degree, "basis": t.basis, "matrix": t.matrix.to_rows() })).collect()
        };
        json!({
            "distinct": d.distinct,
            "witness_degree": d.witness_degree,
            "tau_k": rows(&d.tau_k),
            "tau_dual": rows(&d.tau_dual),
        })
    }))
}
