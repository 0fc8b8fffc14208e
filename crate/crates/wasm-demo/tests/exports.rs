use openbook_wasm::{common, distinguish, induce};
use serde_json::Value;

fn v(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn induce_reports_closed_counts() {
    let r = v(induce(5, "1,2,3"));
    assert_eq!(r["closed"], serde_json::json!([1, 1, 5, 5, 1, 1]));
    assert_eq!(r["chi_open_book"], 0);
    assert_eq!(v(induce(4, "0 1"))["chi_open_book"], 4);
    assert!(v(induce(5, "1,x,3"))["error"].as_str().unwrap().contains("x"));
    assert!(v(induce(5, "1"))["error"].is_string());
}

#[test]
fn common_page_pairs() {
    let r = v(common(4, "2,1", "1,0"));
    assert_eq!(r["profile"], serde_json::json!([2, 1]));
    let r = v(common(5, "0,0,0", "0,1,0"));
    assert!(r["error"].as_str().unwrap().contains("parity"));
}

#[test]
fn distinguish_witness() {
    let r = v(distinguish(5, 2, 1));
    assert_eq!(r["distinct"], true);
    assert_eq!(r["witness_degree"], 1);
    assert_eq!(r["tau_k"][0]["matrix"], serde_json::json!([[1, 1], [0, 1]]));
    assert!(v(distinguish(5, 3, 1))["error"].is_string());
}
