//! Command dispatch for the `openbook` binary, kept in a library so tests
//! can drive it with any engine.

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use openbook::calculus::{self, CalculusError, MoveLog, OpenBookDoc};
use openbook::document::{parse_document, Document, UnknownFields};
use openbook::engine::Engine;
use openbook::handle::HandleId;
use openbook::homology::{
    chain_complex, double_complex, homology_of_complex, open_book_complex, HomologyError,
};
use openbook::report::{Check, Report};
use openbook::selection::Selection;
use openbook::selftest::run_selftest;
use serde_json::Value;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "openbook", version, about = "Handle calculus for open book decompositions")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Warn about unknown document fields instead of rejecting them.
    #[arg(long, global = true)]
    pub lenient: bool,
    /// Write the output document (or the report) to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a document and report any diagnostics.
    Validate { file: PathBuf },
    /// Handle counts of the page.
    Profile { file: PathBuf },
    /// Euler characteristics of the page and the open book.
    Euler { file: PathBuf },
    /// Closed decomposition induced on the open book.
    Induce { file: PathBuf },
    /// Exchange the selected handles.
    Exchange {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', value_name = "ID,ID,...", required = true, allow_hyphen_values = true)]
        select: Vec<String>,
    },
    /// k-stabilization or middle-dimensional stabilization.
    #[command(group(ArgGroup::new("kind").required(true).args(["k", "middle"])))]
    Stabilize {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        middle: bool,
    },
    /// Add a canceling (j, j+1) pair.
    Pad {
        file: PathBuf,
        #[arg(long)]
        j: usize,
    },
    /// Pad, then exchange the upper handle of the new pair.
    PadExchange {
        file: PathBuf,
        #[arg(long)]
        j: usize,
    },
    /// Cancel a handle pair.
    Cancel {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1, value_name = "A,B")]
        pair: Vec<String>,
    },
    /// Exchange into the normal form.
    NormalForm { file: PathBuf },
    /// Pad two pages of equal Euler characteristic to equal handle counts.
    Equalize { file_a: PathBuf, file_b: PathBuf },
    /// Stabilize two open books to a common page.
    CommonPage { file_a: PathBuf, file_b: PathBuf },
    /// Integral homology of the page, its double, or the open book.
    Homology {
        file: PathBuf,
        #[command(flatten)]
        target: HomologyTarget,
    },
    /// Compare tau_k with tau_{n-k+1} on the homology of the double.
    Distinguish {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1", allow_negative_numbers = true, value_parser = parse_sign)]
        sign: i64,
    },
    /// Run the property self-test.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct HomologyTarget {
    #[arg(long)]
    pub page: bool,
    #[arg(long)]
    pub double: bool,
    #[arg(long)]
    pub open_book: bool,
}

fn parse_sign(s: &str) -> Result<i64, String> {
    match s {
        "1" | "+1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(format!("sign must be +1 or -1, got {s}")),
    }
}

/// Everything one invocation writes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{file}:\n{failure}")]
    Parse { file: String, failure: openbook::document::ParseFailure },
    #[error("--pair takes exactly two ids, got {0}")]
    Pair(usize),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Read { .. } | Failure::Pair(_) => EXIT_USAGE,
            Failure::Write { .. } | Failure::Parse { .. } | Failure::Homology(_) => EXIT_DOMAIN,
            Failure::Calculus(CalculusError::Internal(_)) | Failure::Internal(_) => EXIT_INTERNAL,
            Failure::Calculus(_) => EXIT_DOMAIN,
        }
    }
}

/// What a command produced before formatting.
struct Produced {
    report: Report,
    /// Canonical text of the output document(s), if the command transforms.
    output: Option<String>,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_engine(args, &openbook::engine::Reference)
}

pub fn run_with_engine<I, T>(args: I, engine: &dyn Engine) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let command_line = describe(&cli.command);
    match dispatch(&cli, engine) {
        Ok(p) => finish(&cli, p),
        Err(f) => {
            let mut report = Report::new(command_line);
            report.push(Check::verdict("command", "the command completes", false, "success", f.to_string()));
            report.exit_status = f.code();
            let text = if cli.machine { report.machine() } else { format!("{f}\n") };
            Outcome { code: f.code(), stdout: String::new(), stderr: text }
        }
    }
}

fn finish(cli: &Cli, p: Produced) -> Outcome {
    let code = p.report.exit_status;
    let report = if cli.machine { p.report.machine() } else { p.report.human() };
    let mut out = Outcome { code, stdout: String::new(), stderr: String::new() };
    match (p.output, &cli.out) {
        (Some(doc), Some(path)) => {
            if let Err(e) = write(path, &doc) {
                return Outcome { code: e.code(), stdout: String::new(), stderr: format!("{e}\n") };
            }
            out.stderr = report;
        }
        (Some(doc), None) => {
            out.stdout = doc;
            out.stderr = report;
        }
        (None, Some(path)) => {
            if let Err(e) = write(path, &report) {
                return Outcome { code: e.code(), stdout: String::new(), stderr: format!("{e}\n") };
            }
        }
        (None, None) => out.stdout = report,
    }
    out
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|source| Failure::Write { path: path.to_owned(), source })
}

fn describe(c: &Command) -> String {
    let s = format!("{c:?}");
    let name: String = s.split([' ', '{']).next().unwrap_or_default().to_owned();
    let mut kebab = String::new();
    for (i, ch) in name.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            kebab.push('-');
        }
        kebab.push(ch.to_ascii_lowercase());
    }
    kebab
}

fn load(path: &Path, mode: UnknownFields, report: &mut Report) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|source| Failure::Read { path: path.to_owned(), source })?;
    let parsed = parse_document(&text, mode)
        .map_err(|failure| Failure::Parse { file: path.display().to_string(), failure })?;
    for w in &parsed.warnings {
        report.push(Check::verdict(format!("warning {}", w.path), "lenient parsing", true, "", w.to_string()));
    }
    Ok(parsed.document)
}

fn counts(doc: &OpenBookDoc) -> Value {
    match doc.profile() {
        Ok(p) => Value::from(p.counts().to_vec()),
        Err(_) => Value::from(doc.page().counts()),
    }
}

fn dispatch(cli: &Cli, e: &dyn Engine) -> Result<Produced, Failure> {
    let mode = if cli.lenient { UnknownFields::Warn } else { UnknownFields::Reject };
    let mut r = Report::new(describe(&cli.command));
    let step = |r: Report, doc: Document, result: Result<(OpenBookDoc, MoveLog), CalculusError>| {
        transformed(e, r, doc, result?)
    };
    match &cli.command {
        Command::Validate { file } => {
            let doc = load(file, mode, &mut r)?;
            let ob = &doc.open_book;
            r.result("n", ob.n());
            r.result("handles", ob.page().handles().len());
            r.result("page_counts", ob.page().counts());
            r.result("monodromy", ob.monodromy().name());
            r.push(Check::new("valid", "document invariants", "valid", "valid"));
            if let Some(log) = &doc.history {
                let start = log.records().first().map(|rec| rec.counts_before.clone()).unwrap_or_default();
                let replay = log.replay(ob.n(), &start).map_err(|err| err.to_string());
                r.push(Check::new(
                    "history-replays",
                    "logged moves chain to the page",
                    format!("{:?}", Ok::<_, String>(ob.page().counts())),
                    format!("{replay:?}"),
                ));
            }
            Ok(Produced { report: r, output: None })
        }
        Command::Profile { file } => {
            let doc = load(file, mode, &mut r)?;
            let p = doc.open_book.profile()?;
            r.result("n", p.n());
            r.result("profile", p.counts());
            r.result("chi", p.euler_characteristic());
            Ok(Produced { report: r, output: None })
        }
        Command::Euler { file } => {
            let doc = load(file, mode, &mut r)?;
            let p = doc.open_book.profile()?;
            let ob = e.open_book_euler(&p);
            let induced = e.induce_open_book(&doc.open_book)?;
            r.result("chi_page", p.euler_characteristic());
            r.result("chi_open_book", ob);
            r.push(Check::new(
                "alternating-sum",
                "twice chi of the page for even n, zero for odd n",
                ob,
                induced.profile.euler_characteristic(),
            ));
            Ok(Produced { report: r, output: None })
        }
        Command::Induce { file } => {
            let doc = load(file, mode, &mut r)?;
            let induced = e.induce_open_book(&doc.open_book)?;
            r.result("closed_profile", induced.profile.counts());
            let duals: Vec<String> = induced.dual_attachments.iter().map(|d| d.describe()).collect();
            r.result("dual_attachments", duals);
            r.result("chi", induced.profile.euler_characteristic());
            Ok(Produced { report: r, output: None })
        }
        Command::Exchange { file, select } => {
            let doc = load(file, mode, &mut r)?;
            let sel = Selection::new(select.iter().filter(|s| !s.is_empty()).map(|s| HandleId::new(s.as_str())));
            let res = e.exchange_page(&doc.open_book, &sel);
            step(r, doc, res)
        }
        Command::Stabilize { file, k, middle } => {
            let doc = load(file, mode, &mut r)?;
            let res = match (k, middle) {
                (Some(k), false) => e.stabilize_k(&doc.open_book, *k),
                _ => e.stabilize_middle(&doc.open_book),
            };
            step(r, doc, res)
        }
        Command::Pad { file, j } => {
            let doc = load(file, mode, &mut r)?;
            let res = calculus::pad(&doc.open_book, *j);
            step(r, doc, res)
        }
        Command::PadExchange { file, j } => {
            let doc = load(file, mode, &mut r)?;
            let res = calculus::pad_and_exchange(&doc.open_book, *j);
            step(r, doc, res)
        }
        Command::Cancel { file, pair } => {
            let [a, b] = pair.as_slice() else { return Err(Failure::Pair(pair.len())) };
            let doc = load(file, mode, &mut r)?;
            let res = calculus::cancel(&doc.open_book, &HandleId::new(a.as_str()), &HandleId::new(b.as_str()));
            step(r, doc, res)
        }
        Command::NormalForm { file } => {
            let doc = load(file, mode, &mut r)?;
            let res = e.normal_form(&doc.open_book);
            step(r, doc, res)
        }
        Command::Equalize { file_a, file_b } => {
            let (a, b) = (load(file_a, mode, &mut r)?, load(file_b, mode, &mut r)?);
            let (pa, pb) = (a.open_book.profile()?, b.open_book.profile()?);
            let eq = e.equalize_handle_counts(&pa, &pb)?;
            let (l, rr, llog, rlog) = calculus::equalize_documents(&a.open_book, &b.open_book)?;
            r.result("common_profile", eq.profile.counts());
            r.result("pads", llog.len() + rlog.len());
            pair(e, r, (a, l, llog), (b, rr, rlog))
        }
        Command::CommonPage { file_a, file_b } => {
            let (a, b) = (load(file_a, mode, &mut r)?, load(file_b, mode, &mut r)?);
            let c = e.common_page(&a.open_book, &b.open_book)?;
            r.result("common_profile", c.profile.counts());
            pair(e, r, (a, c.left, c.left_log), (b, c.right, c.right_log))
        }
        Command::Homology { file, target } => {
            let doc = load(file, mode, &mut r)?;
            let page = doc.open_book.page();
            let (what, complex) = if target.page {
                ("page", chain_complex(page))
            } else if target.double {
                ("double", double_complex(page))
            } else {
                if !doc.open_book.monodromy().is_identity() {
                    return Err(CalculusError::NonTrivialMonodromy.into());
                }
                ("open_book", open_book_complex(page))
            };
            let h = homology_of_complex(&complex)?;
            r.result("space", what);
            r.result("homology", h.to_string());
            r.result("groups", &h.groups);
            r.result("euler_characteristic", h.euler_characteristic());
            Ok(Produced { report: r, output: None })
        }
        Command::Distinguish { n, k, sign } => {
            let d = e.distinguish(*n, *k, *sign)?;
            r.result("n", d.n);
            r.result("k", d.k);
            r.result("sign", *sign);
            r.result("witness_degree", d.witness_degree);
            let show = |ts: &[openbook::homology::TauAction]| -> Vec<String> {
                ts.iter().map(|t| format!("H_{}: {:?}", t.degree, t.matrix.to_rows())).collect()
            };
            r.result("tau_k", show(&d.tau_k));
            r.result("tau_dual", show(&d.tau_dual));
            r.push(Check::new(
                "distinct",
                "tau_k and tau_{n-k+1} act differently on the homology of the double",
                true,
                d.distinct,
            ));
            r.exit_status = r.status();
            Ok(Produced { report: r, output: None })
        }
        Command::Selftest { seed } => Ok(Produced { report: run_selftest(e, *seed), output: None }),
    }
}

/// Post-checks a move: the result revalidates, its log replays from the
/// input counts, and the output survives a round trip.
fn transformed(e: &dyn Engine, mut r: Report, doc: Document, (ob, log): (OpenBookDoc, MoveLog)) -> Result<Produced, Failure> {
    let n = ob.n();
    let before = doc.open_book.page().counts();
    r.result("profile_before", counts(&doc.open_book));
    r.result("profile_after", counts(&ob));
    r.result("moves", log.records().iter().map(|rec| rec.action.to_string()).collect::<Vec<_>>());
    if let (Some(first), Some(last)) = (log.records().first(), log.records().last()) {
        r.result("chi_before", first.chi_before);
        r.result("chi_after", last.chi_after);
    }
    let replayed = log.replay(n, &before).map_err(|err| Failure::Internal(format!("move log does not replay: {err}")))?;
    if replayed != ob.page().counts() {
        return Err(Failure::Internal(format!("move log ends at {replayed:?}, page has {:?}", ob.page().counts())));
    }
    OpenBookDoc::new(n, ob.page().clone(), ob.monodromy().clone())
        .map_err(|err| Failure::Internal(format!("output fails validation: {err}")))?;
    r.push(Check::new("log-replays", "logged counts chain and chi deltas match the move table", "ok", "ok"));
    let next = doc.advanced(ob, log);
    let text = e.serialize_document(&next);
    match parse_document(&text, UnknownFields::Reject) {
        Ok(p) if p.document == next => {}
        _ => return Err(Failure::Internal("output document does not round-trip".to_owned())),
    }
    Ok(Produced { report: r, output: Some(text) })
}

type Side = (Document, OpenBookDoc, MoveLog);

/// Two-input commands emit `{"left": Document, "right": Document}`.
fn pair(e: &dyn Engine, mut r: Report, left: Side, right: Side) -> Result<Produced, Failure> {
    let mut out = serde_json::Map::new();
    for (key, (doc, ob, log)) in [("left", left), ("right", right)] {
        let p = transformed(e, Report::new(key), doc, (ob, log))?;
        for (k, v) in p.report.results {
            r.results.insert(format!("{key}.{k}"), v);
        }
        for mut c in p.report.checks {
            c.name = format!("{key}/{}", c.name);
            r.push(c);
        }
        let text = p.output.unwrap_or_default();
        let v: Value = serde_json::from_str(&text).map_err(|err| Failure::Internal(err.to_string()))?;
        out.insert(key.to_owned(), v);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(out)).map_err(|err| Failure::Internal(err.to_string()))?;
    text.push('\n');
    Ok(Produced { report: r, output: Some(text) })
}
