//! JSON document format.
//!
//! Canonical output has sorted keys, handles in attachment order,
//! dependencies and incidence sorted by id, two-space indentation and a
//! trailing newline. `parse(serialize(d)) == d` for every valid document.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::calculus::{MoveLog, OpenBookDoc};
use crate::handle::{validate_decomposition, Handle, HandleDecomposition, HandleId, Violation};
use crate::homology::IntegerMatrix;
use crate::monodromy::{MonodromyKind, MonodromySpec, MonodromyViolation, Sign};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A problem found while reading a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Dotted JSON path, e.g. `page.handles[2].id`.
    pub path: String,
    /// 1-based line numbers in the input that the problem refers to.
    pub lines: Vec<usize>,
    /// Name of the broken rule.
    pub invariant: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}")?;
        if !self.lines.is_empty() {
            let lines: Vec<String> = self.lines.iter().map(ToString::to_string).collect();
            write!(f, " (line {})", lines.join(", "))?;
        }
        if !self.path.is_empty() {
            write!(f, " at {}", self.path)?;
        }
        write!(f, ": [{}] {}", self.invariant, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .diagnostics.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
pub struct ParseFailure {
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownFields {
    #[default]
    Reject,
    Warn,
}

/// A validated open book together with its move history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub open_book: OpenBookDoc,
    pub history: Option<MoveLog>,
}

impl Document {
    pub fn new(open_book: OpenBookDoc) -> Self {
        Self { open_book, history: None }
    }

    /// The same document after a move: new open book, log appended.
    pub fn advanced(&self, open_book: OpenBookDoc, log: MoveLog) -> Self {
        let mut history = self.history.clone().unwrap_or_default();
        history.extend(log);
        Self { open_book, history: Some(history) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub document: Document,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireDoc {
    version: u32,
    n: usize,
    page: WirePage,
    monodromy: WireMonodromy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    history: Option<MoveLog>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WirePage {
    dimension: usize,
    handles: Vec<WireHandle>,
    #[serde(default)]
    dependencies: Vec<(HandleId, HandleId)>,
    #[serde(default)]
    incidence: Vec<WireIncidence>,
    boundary_nonempty: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireHandle {
    id: HandleId,
    index: usize,
    #[serde(default)]
    monodromy_trivial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireIncidence {
    from: HandleId,
    to: HandleId,
    coefficient: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireMonodromy {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<Sign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    homology_action: Option<BTreeMap<String, IntegerMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

const TOP_FIELDS: &[&str] = &["version", "n", "page", "monodromy", "history"];
const PAGE_FIELDS: &[&str] = &["dimension", "handles", "dependencies", "incidence", "boundary_nonempty"];
const HANDLE_FIELDS: &[&str] = &["id", "index", "monodromy_trivial", "boundary"];
const INCIDENCE_FIELDS: &[&str] = &["from", "to", "coefficient"];
const MONODROMY_FIELDS: &[&str] = &["kind", "k", "sign", "homology_action", "label"];

/// Locates lines of the input text for diagnostics.
struct Lines<'a> {
    text: &'a str,
}

impl<'a> Lines<'a> {
    fn of_offset(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn matching(&self, pattern: &str) -> Vec<usize> {
        let re = Regex::new(pattern).expect("escaped pattern");
        re.find_iter(self.text).map(|m| self.of_offset(m.start())).collect()
    }

    fn key(&self, key: &str) -> Vec<usize> {
        self.matching(&format!(r#""{}"\s*:"#, regex::escape(key)))
    }

    fn id_definitions(&self, id: &HandleId) -> Vec<usize> {
        self.matching(&format!(r#""id"\s*:\s*"{}""#, regex::escape(id.as_str())))
    }

    fn id_mentions(&self, id: &HandleId) -> Vec<usize> {
        let mut v = self.matching(&format!(r#""{}""#, regex::escape(id.as_str())));
        v.dedup();
        v
    }
}

fn err(path: impl Into<String>, lines: Vec<usize>, invariant: &'static str, message: impl Into<String>) -> Diagnostic {
    Diagnostic { severity: Severity::Error, path: path.into(), lines, invariant, message: message.into() }
}

fn strip_unknown(
    obj: &mut Map<String, Value>,
    known: &[&str],
    path: &str,
    lines: &Lines<'_>,
    mode: UnknownFields,
    out: &mut Vec<Diagnostic>,
) {
    let unknown: Vec<String> = obj.keys().filter(|k| !known.contains(&k.as_str())).cloned().collect();
    for key in unknown {
        obj.remove(&key);
        let severity = match mode {
            UnknownFields::Reject => Severity::Error,
            UnknownFields::Warn => Severity::Warning,
        };
        out.push(Diagnostic {
            severity,
            path: if path.is_empty() { key.clone() } else { format!("{path}.{key}") },
            lines: lines.key(&key),
            invariant: "known fields",
            message: format!("unknown field `{key}`"),
        });
    }
}

fn walk_unknown(root: &mut Value, lines: &Lines<'_>, mode: UnknownFields, out: &mut Vec<Diagnostic>) {
    let Some(top) = root.as_object_mut() else { return };
    strip_unknown(top, TOP_FIELDS, "", lines, mode, out);
    if let Some(Value::Object(page)) = top.get_mut("page") {
        strip_unknown(page, PAGE_FIELDS, "page", lines, mode, out);
        if let Some(Value::Array(hs)) = page.get_mut("handles") {
            for (i, h) in hs.iter_mut().enumerate() {
                if let Value::Object(h) = h {
                    strip_unknown(h, HANDLE_FIELDS, &format!("page.handles[{i}]"), lines, mode, out);
                }
            }
        }
        if let Some(Value::Array(xs)) = page.get_mut("incidence") {
            for (i, x) in xs.iter_mut().enumerate() {
                if let Value::Object(x) = x {
                    strip_unknown(x, INCIDENCE_FIELDS, &format!("page.incidence[{i}]"), lines, mode, out);
                }
            }
        }
    }
    if let Some(Value::Object(m)) = top.get_mut("monodromy") {
        strip_unknown(m, MONODROMY_FIELDS, "monodromy", lines, mode, out);
    }
}

fn violation_diagnostic(v: &Violation, page: &HandleDecomposition, lines: &Lines<'_>) -> Diagnostic {
    let handle_path = |id: &HandleId| {
        page.position(id).map_or_else(|| "page.handles".to_owned(), |p| format!("page.handles[{p}]"))
    };
    let (path, found, invariant) = match v {
        Violation::DimensionTooSmall { .. } => ("page.dimension".to_owned(), lines.key("dimension"), "dimension at least 2"),
        Violation::DuplicateId { id, second, .. } => {
            (format!("page.handles[{second}].id"), lines.id_definitions(id), "unique handle ids")
        }
        Violation::IndexOutOfRange { id, .. } => (handle_path(id), lines.id_definitions(id), "index within dimension"),
        Violation::OrderNotNonDecreasing { later, .. } => {
            (handle_path(later), lines.id_definitions(later), "non-decreasing index order")
        }
        Violation::UnknownHandle { id, context } => (format!("page.{context}"), lines.id_mentions(id), "known handle ids"),
        Violation::DependencyOrder { from, .. } => {
            ("page.dependencies".to_owned(), lines.id_definitions(from), "dependencies point backwards")
        }
        Violation::IncidenceOutsideDependencies { from, .. } => {
            ("page.incidence".to_owned(), lines.id_mentions(from), "incidence within dependencies")
        }
        Violation::IncidenceIndexMismatch { from, .. } => {
            ("page.incidence".to_owned(), lines.id_mentions(from), "incidence between adjacent indices")
        }
        Violation::ZeroIncidence { from, .. } => ("page.incidence".to_owned(), lines.id_mentions(from), "non-zero incidence"),
        Violation::ZeroHandleCount { .. } => ("page.handles".to_owned(), lines.key("handles"), "exactly one 0-handle"),
        Violation::TopHandleWithBoundary { id } => {
            (handle_path(id), lines.id_definitions(id), "no top handle when boundary is non-empty")
        }
        Violation::BoundarySquareNonzero { .. } => ("page.incidence".to_owned(), lines.key("incidence"), "boundary squares to zero"),
    };
    err(path, found, invariant, v.to_string())
}

fn monodromy_diagnostic(v: &MonodromyViolation, page: &HandleDecomposition, lines: &Lines<'_>) -> Diagnostic {
    match v {
        MonodromyViolation::IdentityWithNontrivialHandle(id) => {
            let id = HandleId::new(id.as_str());
            let path = page.position(&id).map_or_else(String::new, |p| format!("page.handles[{p}].monodromy_trivial"));
            err(path, lines.id_definitions(&id), "identity monodromy is trivial on every handle", v.to_string())
        }
        MonodromyViolation::TauIndex { .. } => err("monodromy.k", lines.key("k"), "tau index in range", v.to_string()),
        _ => err("monodromy.homology_action", lines.key("homology_action"), "unimodular homology action", v.to_string()),
    }
}

fn build_monodromy(w: WireMonodromy, lines: &Lines<'_>, out: &mut Vec<Diagnostic>) -> Option<MonodromySpec> {
    let kind = match w.kind.as_str() {
        "identity" => MonodromyKind::Identity,
        "annotated" => MonodromyKind::Annotated,
        "tau" => match (w.k, w.sign) {
            (Some(k), sign) => MonodromyKind::Tau { k, sign: sign.unwrap_or(Sign::Plus) },
            (None, _) => {
                out.push(err("monodromy.k", lines.key("kind"), "tau needs k", "monodromy kind tau requires `k`"));
                return None;
            }
        },
        other => {
            out.push(err(
                "monodromy.kind",
                lines.key("kind"),
                "known monodromy kind",
                format!("unknown monodromy kind `{other}`; expected identity, annotated or tau"),
            ));
            return None;
        }
    };
    if !matches!(kind, MonodromyKind::Tau { .. }) && (w.k.is_some() || w.sign.is_some()) {
        out.push(err("monodromy", lines.key("kind"), "k and sign only for tau", "`k` and `sign` apply to kind tau only"));
        return None;
    }
    let mut homology_action = BTreeMap::new();
    for (key, m) in w.homology_action.unwrap_or_default() {
        match key.parse::<usize>() {
            Ok(d) => {
                homology_action.insert(d, m);
            }
            Err(_) => {
                out.push(err(
                    format!("monodromy.homology_action.{key}"),
                    lines.key(&key),
                    "degree keys",
                    format!("homology_action key `{key}` is not a degree"),
                ));
                return None;
            }
        }
    }
    Some(MonodromySpec { kind, homology_action, label: w.label })
}

fn build(w: WireDoc, lines: &Lines<'_>) -> Result<Document, Vec<Diagnostic>> {
    let mut out = Vec::new();
    if w.version != SCHEMA_VERSION {
        out.push(err(
            "version",
            lines.key("version"),
            "schema version",
            format!("unsupported version {}, expected {SCHEMA_VERSION}", w.version),
        ));
        return Err(out);
    }
    let monodromy = build_monodromy(w.monodromy, lines, &mut out);
    let identity = monodromy.as_ref().is_some_and(MonodromySpec::is_identity);
    let mut handles = Vec::with_capacity(w.page.handles.len());
    for (i, h) in w.page.handles.into_iter().enumerate() {
        let trivial = match (h.monodromy_trivial, identity) {
            (Some(t), _) => t,
            (None, true) => true,
            (None, false) => {
                out.push(err(
                    format!("page.handles[{i}].monodromy_trivial"),
                    lines.id_definitions(&h.id),
                    "explicit monodromy flags",
                    format!("handle {} needs an explicit monodromy_trivial unless the monodromy is the identity", h.id),
                ));
                false
            }
        };
        handles.push(Handle { id: h.id, index: h.index, monodromy_trivial: trivial, boundary: h.boundary });
    }
    let mut incidence = BTreeMap::new();
    for (i, x) in w.page.incidence.into_iter().enumerate() {
        let key = (x.from, x.to);
        if incidence.insert(key.clone(), x.coefficient).is_some() {
            out.push(err(
                format!("page.incidence[{i}]"),
                lines.id_mentions(&key.0),
                "single incidence entry per pair",
                format!("incidence ({}, {}) is listed twice", key.0, key.1),
            ));
        }
    }
    let dependencies: BTreeSet<_> = w.page.dependencies.into_iter().collect();
    let page = HandleDecomposition::from_parts(
        w.page.dimension,
        handles,
        dependencies,
        incidence,
        w.page.boundary_nonempty,
    );
    if w.n < 3 {
        out.push(err("n", lines.key("n"), "n at least 3", format!("total dimension n = {} is below 3", w.n)));
    } else if page.dimension() + 1 != w.n {
        out.push(err(
            "page.dimension",
            lines.key("dimension"),
            "page dimension n - 1",
            format!("page dimension {} does not equal n - 1 = {}", page.dimension(), w.n - 1),
        ));
    }
    out.extend(validate_decomposition(&page).iter().map(|v| violation_diagnostic(v, &page, lines)));
    if let Some(m) = &monodromy {
        if out.is_empty() {
            out.extend(m.check_against(&page, w.n).iter().map(|v| monodromy_diagnostic(v, &page, lines)));
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    let monodromy = monodromy.expect("reported above when missing");
    match OpenBookDoc::new(w.n, page, monodromy) {
        Ok(open_book) => Ok(Document { open_book, history: w.history }),
        Err(e) => Err(vec![err("", Vec::new(), "open book", e.to_string())]),
    }
}

/// Parses and validates a document; unknown fields are rejected or, in
/// [`UnknownFields::Warn`] mode, dropped with a warning.
pub fn parse_document(text: &str, mode: UnknownFields) -> Result<Parsed, ParseFailure> {
    let lines = Lines { text };
    let mut value: Value = serde_json::from_str(text).map_err(|e| ParseFailure {
        diagnostics: vec![err("", vec![e.line()], "JSON syntax", e.to_string())],
    })?;
    let mut diagnostics = Vec::new();
    walk_unknown(&mut value, &lines, mode, &mut diagnostics);
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(ParseFailure { diagnostics });
    }
    let wire: WireDoc = serde_json::from_value(value).map_err(|e| ParseFailure {
        diagnostics: vec![err("", Vec::new(), "schema", e.to_string())],
    })?;
    match build(wire, &lines) {
        Ok(document) => Ok(Parsed { document, warnings: diagnostics }),
        Err(errors) => Err(ParseFailure { diagnostics: errors }),
    }
}

fn to_wire(d: &Document) -> WireDoc {
    let doc = &d.open_book;
    let page = doc.page();
    let m = doc.monodromy();
    let (kind, k, sign) = match m.kind {
        MonodromyKind::Identity => ("identity", None, None),
        MonodromyKind::Annotated => ("annotated", None, None),
        MonodromyKind::Tau { k, sign } => ("tau", Some(k), Some(sign)),
    };
    WireDoc {
        version: SCHEMA_VERSION,
        n: doc.n(),
        page: WirePage {
            dimension: page.dimension(),
            handles: page
                .handles()
                .iter()
                .map(|h| WireHandle {
                    id: h.id.clone(),
                    index: h.index,
                    monodromy_trivial: Some(h.monodromy_trivial),
                    boundary: h.boundary.clone(),
                })
                .collect(),
            dependencies: page.dependencies().iter().cloned().collect(),
            incidence: page
                .incidence()
                .iter()
                .map(|((from, to), &coefficient)| WireIncidence { from: from.clone(), to: to.clone(), coefficient })
                .collect(),
            boundary_nonempty: page.boundary_nonempty(),
        },
        monodromy: WireMonodromy {
            kind: kind.to_owned(),
            k,
            sign,
            homology_action: (!m.homology_action.is_empty())
                .then(|| m.homology_action.iter().map(|(d, x)| (d.to_string(), x.clone())).collect()),
            label: m.label.clone(),
        },
        history: d.history.clone(),
    }
}

/// Canonical text: sorted keys, pretty-printed, trailing newline.
pub fn serialize_document(d: &Document) -> String {
    // serde_json's default map is ordered by key
    let value = serde_json::to_value(to_wire(d)).expect("document values are plain data");
    let mut s = serde_json::to_string_pretty(&value).expect("a Value always serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANNULUS: &str = r#"{
  "version": 1,
  "n": 3,
  "page": {
    "dimension": 2,
    "handles": [
      {"id": "h0", "index": 0},
      {"id": "h1", "index": 1}
    ],
    "dependencies": [],
    "incidence": [],
    "boundary_nonempty": true
  },
  "monodromy": {"kind": "identity"}
}"#;

    #[test]
    fn annulus_parses() {
        let d = parse_document(ANNULUS, UnknownFields::Reject).unwrap().document;
        assert_eq!(d.open_book.profile().unwrap().counts(), &[1]);
        assert!(d.open_book.page().handles().iter().all(|h| h.monodromy_trivial));
    }

    #[test]
    fn round_trip_is_canonical() {
        let d = parse_document(ANNULUS, UnknownFields::Reject).unwrap().document;
        let text = serialize_document(&d);
        let again = parse_document(&text, UnknownFields::Reject).unwrap().document;
        assert_eq!(again, d);
        assert_eq!(serialize_document(&again), text);
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn key_order_does_not_matter() {
        let reordered = r#"{"monodromy": {"kind": "identity"}, "page": {"boundary_nonempty": true,
            "incidence": [], "dependencies": [], "handles": [{"index": 0, "id": "h0"}, {"index": 1, "id": "h1"}],
            "dimension": 2}, "n": 3, "version": 1}"#;
        let a = parse_document(ANNULUS, UnknownFields::Reject).unwrap().document;
        let b = parse_document(reordered, UnknownFields::Reject).unwrap().document;
        assert_eq!(serialize_document(&a), serialize_document(&b));
    }

    #[test]
    fn duplicate_ids_name_both_lines() {
        let text = ANNULUS.replace(r#""id": "h1""#, r#""id": "h0""#);
        let f = parse_document(&text, UnknownFields::Reject).unwrap_err();
        let dup = f.diagnostics.iter().find(|d| d.message.contains("duplicate id")).unwrap();
        assert_eq!(dup.lines, vec![7, 8]);
        assert_eq!(dup.invariant, "unique handle ids");
    }

    #[test]
    fn unknown_handle_in_incidence() {
        let text = ANNULUS.replace(r#""incidence": []"#, r#""incidence": [{"from": "hx", "to": "h0", "coefficient": 1}]"#);
        let f = parse_document(&text, UnknownFields::Reject).unwrap_err();
        assert!(f.diagnostics.iter().any(|d| d.message.contains("unknown handle") && d.lines == vec![11]));
    }

    #[test]
    fn unknown_fields_strict_and_lenient() {
        let text = ANNULUS.replace(r#""n": 3,"#, r#""n": 3, "colour": "red","#);
        let f = parse_document(&text, UnknownFields::Reject).unwrap_err();
        assert_eq!(f.diagnostics[0].path, "colour");
        assert_eq!(f.diagnostics[0].lines, vec![3]);
        let p = parse_document(&text, UnknownFields::Warn).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.warnings[0].severity, Severity::Warning);
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let f = parse_document("{\n  \"version\": 1,\n  oops\n}", UnknownFields::Reject).unwrap_err();
        assert_eq!(f.diagnostics[0].lines, vec![3]);
        assert_eq!(f.diagnostics[0].invariant, "JSON syntax");
    }

    #[test]
    fn flags_must_be_explicit_without_identity() {
        let text = ANNULUS.replace(r#"{"kind": "identity"}"#, r#"{"kind": "annotated"}"#);
        let f = parse_document(&text, UnknownFields::Reject).unwrap_err();
        assert!(f.diagnostics.iter().all(|d| d.invariant == "explicit monodromy flags"));
        assert_eq!(f.diagnostics.len(), 2);
    }

    #[test]
    fn tau_and_history_round_trip() {
        let doc = OpenBookDoc::natural(&crate::profile::Profile::disk(5).unwrap());
        let (out, log) = crate::calculus::stabilize_k(&doc, 3).unwrap();
        let d = Document::new(doc).advanced(out, log);
        let text = serialize_document(&d);
        assert!(text.contains("\"kind\": \"tau\""));
        let back = parse_document(&text, UnknownFields::Reject).unwrap().document;
        assert_eq!(back, d);
        assert_eq!(back.history.unwrap().len(), 1);
    }

    #[test]
    fn version_and_dimension_checks() {
        let f = parse_document(&ANNULUS.replace(r#""version": 1"#, r#""version": 7"#), UnknownFields::Reject).unwrap_err();
        assert_eq!(f.diagnostics[0].invariant, "schema version");
        let f = parse_document(&ANNULUS.replace(r#""n": 3"#, r#""n": 4"#), UnknownFields::Reject).unwrap_err();
        assert_eq!(f.diagnostics[0].invariant, "page dimension n - 1");
    }
}
