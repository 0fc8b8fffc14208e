use rand::Rng;

use super::{fixtures, gen, oracle};
use crate::calculus::{self, CalculusError, Move, OpenBookDoc};
use crate::document::{parse_document, serialize_document, UnknownFields};
use crate::engine::Engine;
use crate::homology::{
    chain_complex, double_complex, double_homology_natural, homology_of_complex, open_book_complex,
    open_book_homology_trivial, page_homology, ChainComplex, IntegerMatrix,
};
use crate::profile::Profile;
use crate::report::Check;
use crate::selection::{is_valid_selection, SelectionCheck};

/// Sample sizes of the randomized suites.
#[derive(Debug, Clone, Copy)]
pub struct Sizes {
    pub profiles: usize,
    pub documents: usize,
    pub equalize_pairs: usize,
    pub common_pairs: usize,
    pub matrices: usize,
}

impl Sizes {
    pub const FULL: Sizes = Sizes { profiles: 1000, documents: 500, equalize_pairs: 500, common_pairs: 200, matrices: 1000 };
}

/// Counts failures of one property over a sample, keeping the first counterexample.
struct Tally {
    name: String,
    law: &'static str,
    total: usize,
    failed: usize,
    first: Option<String>,
}

impl Tally {
    fn new(suite: &str, name: &str, law: &'static str) -> Self {
        Self { name: format!("{suite}/{name}"), law, total: 0, failed: 0, first: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn check(self) -> Check {
        let expected = format!("{} of {} hold", self.total, self.total);
        let mut actual = format!("{} of {} hold", self.total - self.failed, self.total);
        if let Some(f) = self.first {
            actual.push_str(&format!("; first failure: {f}"));
        }
        Check::verdict(self.name, self.law, self.failed == 0 && self.total > 0, expected, actual)
    }
}

fn example(suite: &str, name: &str, law: &str, expected: impl ToString, actual: impl ToString) -> Check {
    Check::new(format!("{suite}/{name}"), law, expected, actual)
}

fn natural(n: usize, mu: &[u64]) -> OpenBookDoc {
    OpenBookDoc::natural(&Profile::new(n, mu.to_vec()).expect("profile"))
}

fn mu_of(doc: &OpenBookDoc) -> Result<Vec<u64>, CalculusError> {
    Ok(doc.profile()?.counts().to_vec())
}

fn show<T: std::fmt::Debug, E: std::fmt::Display>(r: &Result<T, E>) -> String {
    match r {
        Ok(v) => format!("Ok({v:?})"),
        Err(e) => format!("error: {e}"),
    }
}

const TABLE1: &str = "induced counts (1, mu1, mu2+mu_{n-2}, ..., mu1, 1)";

pub(crate) fn profile_law(e: &dyn Engine, seed: u64, sizes: Sizes) -> Vec<Check> {
    let suite = "profile-law";
    let induced = |doc: &OpenBookDoc| e.induce_open_book(doc).map(|i| i.profile.counts().to_vec());
    let mut out = vec![
        example(suite, "n5-123", TABLE1, "Ok([1, 1, 5, 5, 1, 1])", show(&induced(&natural(5, &[1, 2, 3])))),
        example(suite, "annulus", "annulus open book (1, 1, 1, 1)", "Ok([1, 1, 1, 1])", show(&induced(&fixtures::annulus()))),
        example(suite, "n4-01", TABLE1, "Ok([1, 0, 2, 0, 1])", show(&induced(&natural(4, &[0, 1])))),
    ];
    let mut rng = gen::rng(seed);
    let mut t = Tally::new(suite, "random-profiles", TABLE1);
    for _ in 0..sizes.profiles {
        let n = rng.gen_range(3..=10);
        let p = gen::profile(&mut rng, n, 9);
        let expected = oracle::induced_counts(n, p.counts());
        let got = induced(&OpenBookDoc::natural(&p));
        t.record(got.as_ref().is_ok_and(|c| *c == expected), || format!("n={n} {p}: {}", show(&got)));
    }
    out.push(t.check());
    out
}

const EULER: &str = "chi(Ob) = 2 chi(page) for even n, 0 for odd n";

pub(crate) fn euler_law(e: &dyn Engine, seed: u64, sizes: Sizes) -> Vec<Check> {
    let suite = "euler-law";
    let p = |n: usize, c: &[u64]| Profile::new(n, c.to_vec()).expect("profile");
    let mut out = vec![
        example(suite, "n4-01", EULER, 4, e.open_book_euler(&p(4, &[0, 1]))),
        example(suite, "n5-odd", EULER, 0, e.open_book_euler(&p(5, &[3, 1, 4]))),
        example(suite, "n4-21", EULER, 0, e.open_book_euler(&p(4, &[2, 1]))),
    ];
    let mut rng = gen::rng(seed);
    let mut t = Tally::new(suite, "random-profiles", EULER);
    for _ in 0..sizes.profiles {
        let n = rng.gen_range(3..=10);
        let prof = gen::profile(&mut rng, n, 9);
        let expected = oracle::open_book_chi(n, prof.counts());
        let formula = e.open_book_euler(&prof);
        let alternating = calculus::induce_open_book(&OpenBookDoc::natural(&prof))
            .map(|i| oracle::alternating(i.profile.counts()));
        let ok = formula == expected && alternating == Ok(expected);
        t.record(ok, || format!("n={n} {prof}: formula {formula}, induced {}", show(&alternating)));
    }
    out.push(t.check());
    out
}

const EXCHANGE: &str = "exchange moves preserve the induced decomposition counts";

pub(crate) fn exchange_commutation(e: &dyn Engine, seed: u64, sizes: Sizes) -> Vec<Check> {
    let suite = "exchange-commutation";
    let exchanged = |doc: &OpenBookDoc, ids: &[&str]| {
        e.exchange_page(doc, &crate::selection::Selection::new(ids.iter().copied())).and_then(|(d, _)| mu_of(&d))
    };
    let mut out = vec![
        example(suite, "s3xd1-to-s2xd2", "exchanged page of S^3 x D^1", "Ok([0, 1, 0])", show(&exchanged(&fixtures::s3_x_d1(), &["h3_1"]))),
        example(suite, "empty-selection", "empty exchange", "Ok([2, 1, 3])", show(&exchanged(&natural(5, &[2, 1, 3]), &[]))),
        example(
            suite,
            "n5-213-all",
            "exchange of all upper handles",
            "Ok([2, 3, 1])",
            show(&exchanged(&natural(5, &[2, 1, 3]), &["h2_1", "h3_1", "h3_2", "h3_3"])),
        ),
    ];
    let mut rng = gen::rng(seed);
    let mut t = Tally::new(suite, "random-documents", EXCHANGE);
    for _ in 0..sizes.documents {
        let n = rng.gen_range(3..=8);
        let doc = gen::document(&mut rng, n);
        let sel = gen::exchangeable_selection(&mut rng, &doc);
        let before = doc.page().counts();
        let mut expected_counts = before.clone();
        for id in sel.ids() {
            let k = doc.page().handle(id).map_or(0, |h| h.index);
            expected_counts[k] -= 1;
            expected_counts[n - k] += 1;
        }
        let result = e.exchange_page(&doc, &sel).and_then(|(d, _)| {
            let after = calculus::induce_open_book(&d)?.profile.counts().to_vec();
            Ok((d.page().counts(), after))
        });
        let mu_before = &before[1..n - 1];
        let induced_before = oracle::induced_counts(n, mu_before);
        let ok = match &result {
            Ok((counts, induced_after)) => *counts == expected_counts && *induced_after == induced_before,
            Err(_) => false,
        };
        t.record(ok, || format!("n={n} counts {before:?} selection {:?}: {}", sel.ids(), show(&result)));
    }
    out.push(t.check());
    out
}

const NORMAL: &str = "normal form: nu1 = mu1, nu_i = mu_{n-i}";

pub(crate) fn normal_form(e: &dyn Engine, seed: u64, _sizes: Sizes) -> Vec<Check> {
    let suite = "normal-form";
    let nf = |doc: &OpenBookDoc| e.normal_form(doc).and_then(|(d, _)| mu_of(&d));
    let mut out = vec![
        example(suite, "n6-1200", NORMAL, "Ok([1, 0, 0, 2])", show(&nf(&natural(6, &[1, 2, 0, 0])))),
        example(suite, "n6-1020", NORMAL, "Ok([1, 0, 2, 0])", show(&nf(&natural(6, &[1, 0, 2, 0])))),
        example(suite, "n5-312", NORMAL, "Ok([3, 2, 1])", show(&nf(&natural(5, &[3, 1, 2])))),
        example(
            suite,
            "n5-312-identity",
            "natural pages keep identity monodromy",
            true,
            e.normal_form(&natural(5, &[3, 1, 2])).is_ok_and(|(d, _)| d.monodromy().is_identity()),
        ),
    ];
    let mut rng = gen::rng(seed);
    let mut t = Tally::new(suite, "tail-reversal", NORMAL);
    let mut twice = Tally::new(suite, "involution", "normal form twice restores a natural profile");
    for n in 4..=10 {
        for _ in 0..40 {
            let p = gen::profile(&mut rng, n, 9);
            let expected = oracle::tail_reversal(p.counts());
            let doc = OpenBookDoc::natural(&p);
            let once = e.normal_form(&doc);
            let got = once.as_ref().map_err(Clone::clone).and_then(|(d, _)| mu_of(d));
            t.record(got.as_ref() == Ok(&expected), || format!("n={n} {p}: {}", show(&got)));
            let back = once.and_then(|(d, _)| e.normal_form(&d)).and_then(|(d, _)| mu_of(&d));
            twice.record(back.as_ref() == Ok(&p.counts().to_vec()), || format!("n={n} {p}: {}", show(&back)));
        }
    }
    out.push(t.check());
    out.push(twice.check());
    out
}

const STAB: &str = "stabilization changes chi(page) by (-1)^(k-1) 2 for odd n, 0 for even n";

pub(crate) fn stabilization_bookkeeping(e: &dyn Engine, seed: u64, _sizes: Sizes) -> Vec<Check> {
    let suite = "stabilization-bookkeeping";
    let mut rng = gen::rng(seed);
    let mut out = Vec::new();
    let d4 = fixtures::d4();
    let r = e.stabilize_k(&d4, 3);
    out.push(example(
        suite,
        "d4-k3",
        STAB,
        "Ok(([0, 2, 0], 1, 3))",
        show(&r.and_then(|(d, log)| {
            let rec = log.records().first().cloned().ok_or_else(|| CalculusError::Internal("empty log".into()))?;
            Ok((mu_of(&d)?, rec.chi_before, rec.chi_after))
        })),
    ));

    let mut k_tally = Tally::new(suite, "k-deltas", STAB);
    let mut mid_tally = Tally::new(suite, "middle-deltas", "middle stabilization changes chi(page) by (-1)^l");
    let mut inv_tally = Tally::new(suite, "euler-invariance", "open book Euler characteristic is unchanged by every move");
    for n in 3..=10 {
        let mut bases = vec![OpenBookDoc::natural(&Profile::disk(n).expect("n >= 3"))];
        bases.push(OpenBookDoc::natural(&gen::profile(&mut rng, n, 3)));
        for base in &bases {
            let start = base.profile().expect("natural profile");
            let ob_chi = calculus::open_book_euler(&start);
            for k in 2..n {
                let res = e.stabilize_k(base, k);
                let ok = match &res {
                    Ok((doc, log)) => {
                        let recs = log.records();
                        let page_chi = doc.profile().map(|p| p.euler_characteristic());
                        recs.len() == 1
                            && recs[0].action == Move::StabilizeK { k }
                            && recs[0].chi_after - recs[0].chi_before == oracle::stabilization_delta(n, k)
                            && recs[0].chi_before == start.euler_characteristic()
                            && page_chi == Ok(recs[0].chi_after)
                            && oracle::replay(n, &base.page().counts(), log).as_ref() == Ok(&doc.page().counts())
                    }
                    Err(_) => false,
                };
                k_tally.record(ok, || format!("n={n} k={k} from {start}: {}", show(&res.as_ref().map(|(_, l)| l.clone()))));
                if let Ok((doc, _)) = &res {
                    let after = doc.profile().map(|p| calculus::open_book_euler(&p));
                    inv_tally.record(after == Ok(ob_chi), || format!("stabilize_k({k}) at n={n}"));
                }
            }
            if n % 2 == 1 {
                let res = calculus::stabilize_middle(base);
                let ok = res.as_ref().is_ok_and(|(doc, log)| {
                    let r = &log.records()[0];
                    r.chi_after - r.chi_before == oracle::middle_delta(n)
                        && doc.profile().map(|p| calculus::open_book_euler(&p)) == Ok(ob_chi)
                });
                mid_tally.record(ok, || format!("n={n} from {start}"));
            }
            // exchanges and pads keep the total space
            let sel = calculus::almost_canonical_selection(base);
            let ex = calculus::exchange_page(base, &sel).and_then(|(d, _)| d.profile());
            inv_tally.record(ex.as_ref().map(calculus::open_book_euler) == Ok(ob_chi), || format!("exchange at n={n}"));
            if n >= 4 {
                let j = rng.gen_range(1..=n - 3);
                let padded = calculus::pad(base, j).and_then(|(d, _)| d.profile());
                inv_tally.record(padded.as_ref().map(calculus::open_book_euler) == Ok(ob_chi), || format!("pad({j}) at n={n}"));
            }
            if n >= 4 {
                let j = rng.gen_range(2..=n - 2);
                let pe = calculus::pad_and_exchange(base, j).and_then(|(d, _)| d.profile());
                inv_tally.record(pe.as_ref().map(calculus::open_book_euler) == Ok(ob_chi), || format!("pad_and_exchange({j}) at n={n}"));
            }
        }
    }
    out.push(k_tally.check());
    out.push(mid_tally.check());
    out.push(inv_tally.check());
    out
}

const HOPF: &str = "one 2-stabilization equals two Hopf plumbings at n = 3";

pub(crate) fn hopf_relation(e: &dyn Engine, _seed: u64, _sizes: Sizes) -> Vec<Check> {
    let suite = "hopf-relation";
    let disk = OpenBookDoc::natural(&Profile::disk(3).expect("n = 3"));
    let once = e.stabilize_middle(&disk);
    let twice = once.clone().and_then(|(d, _)| e.stabilize_middle(&d));
    let k2 = calculus::stabilize_k(&disk, 2);
    let profile = |r: &Result<(OpenBookDoc, crate::calculus::MoveLog), CalculusError>| {
        r.as_ref().map_err(Clone::clone).and_then(|(d, _)| mu_of(d))
    };
    vec![
        example(suite, "single-plumbing", "a Hopf plumbing turns the disk into an annulus", "Ok([1])", show(&profile(&once))),
        example(suite, "two-plumbings", HOPF, "Ok([2])", show(&profile(&twice))),
        example(suite, "k2-stabilization", HOPF, "Ok([2])", show(&profile(&k2))),
        example(suite, "same-profile", HOPF, true, profile(&twice).is_ok() && profile(&twice) == profile(&k2)),
    ]
}

const EQUALIZE: &str = "equal chi pages pad to the same handle counts";

pub(crate) fn equalization(e: &dyn Engine, seed: u64, sizes: Sizes) -> Vec<Check> {
    let suite = "equalization";
    let p = |n: usize, c: &[u64]| Profile::new(n, c.to_vec()).expect("profile");
    let common = |a: Profile, b: Profile| e.equalize_handle_counts(&a, &b).map(|r| r.profile.counts().to_vec());
    let mut out = vec![
        example(suite, "n5-210-vs-100", EQUALIZE, "Ok([2, 1, 0])", show(&common(p(5, &[2, 1, 0]), p(5, &[1, 0, 0])))),
        example(suite, "n5-001-vs-012", EQUALIZE, "Ok([0, 1, 2])", show(&common(p(5, &[0, 0, 1]), p(5, &[0, 1, 2])))),
        example(
            suite,
            "chi-mismatch",
            "equalization needs equal chi",
            "Err(ChiMismatch { left: 0, right: 1 })",
            format!("{:?}", common(p(5, &[1, 0, 0]), p(5, &[0, 0, 0]))),
        ),
    ];
    let mut rng = gen::rng(seed);
    let mut t = Tally::new(suite, "random-pairs", EQUALIZE);
    for _ in 0..sizes.equalize_pairs {
        let n = rng.gen_range(3..=10);
        let (a, b) = gen::equal_chi_pair(&mut rng, n, 9);
        let res = e.equalize_handle_counts(&a, &b);
        let verdict = res.as_ref().map_err(ToString::to_string).and_then(|r| {
            let mut finals = Vec::new();
            for (start, log) in [(&a, &r.left_log), (&b, &r.right_log)] {
                let chi = oracle::page_chi(start.counts());
                let mut cur = start.page_counts();
                for rec in log.records() {
                    let Move::Pad { j } = rec.action else { return Err(format!("non-pad move {}", rec.action)) };
                    if rec.counts_before != cur || rec.chi_before != chi || rec.chi_after != chi {
                        return Err("broken chain or chi change".into());
                    }
                    cur[j] += 1;
                    cur[j + 1] += 1;
                    if rec.counts_after != cur {
                        return Err(format!("pad({j}) is not a single (j, j+1) pair"));
                    }
                }
                finals.push(cur);
            }
            // exact pad count: partial alternating differences
            let mut pads = 0i64;
            let mut d = 0i64;
            for j in 1..n - 2 {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                d += sign * (a.counts()[j - 1] as i64 - b.counts()[j - 1] as i64);
                pads += d.abs();
            }
            let used = (r.left_log.len() + r.right_log.len()) as i64;
            if finals[0] != finals[1] || finals[0] != r.profile.page_counts() {
                return Err(format!("logs end at {:?} and {:?}", finals[0], finals[1]));
            }
            if used != pads {
                return Err(format!("{used} pads, expected {pads}"));
            }
            Ok(())
        });
        t.record(verdict.is_ok(), || format!("n={n} {a} vs {b}: {verdict:?}"));
    }
    out.push(t.check());
    out
}

const COMMON: &str = "open books with identity monodromy stabilize to a common page";

pub(crate) fn common_page(e: &dyn Engine, seed: u64, sizes: Sizes) -> Vec<Check> {
    let suite = "common-page";
    let run = |x: &OpenBookDoc, y: &OpenBookDoc| e.common_page(x, y).map(|c| c.profile.counts().to_vec());
    let mut out = vec![
        example(suite, "n4-21-vs-10", COMMON, "Ok([2, 1])", show(&run(&natural(4, &[2, 1]), &natural(4, &[1, 0])))),
        example(
            suite,
            "n5-parity",
            "odd n needs chi parity",
            "Err(ParityViolated { left: 1, right: 2 })",
            format!("{:?}", run(&natural(5, &[0, 0, 0]), &natural(5, &[0, 1, 0]))),
        ),
    ];
    let mut rng = gen::rng(seed);
    let mut ok_tally = Tally::new(suite, "random-pairs", COMMON);
    let mut bad_tally = Tally::new(suite, "violating-pairs", "the named condition error is reported");
    for i in 0..sizes.common_pairs {
        let n = rng.gen_range(3..=8);
        let (a, b) = gen::common_page_pair(&mut rng, n, 4);
        let (x, y) = (OpenBookDoc::natural(&a), OpenBookDoc::natural(&b));
        let res = e.common_page(&x, &y);
        let verdict = res.as_ref().map_err(ToString::to_string).and_then(|c| {
            let target = c.profile.page_counts();
            let l = oracle::replay(n, &x.page().counts(), &c.left_log)?;
            let r = oracle::replay(n, &y.page().counts(), &c.right_log)?;
            let docs = (mu_of(&c.left).map_err(|e| e.to_string())?, mu_of(&c.right).map_err(|e| e.to_string())?);
            if l != target || r != target || docs.0 != docs.1 || docs.0 != c.profile.counts() {
                return Err(format!("logs end at {l:?} and {r:?}, profile {}", c.profile));
            }
            Ok(())
        });
        ok_tally.record(verdict.is_ok(), || format!("n={n} {a} vs {b}: {verdict:?}"));

        if i % 2 == 0 {
            let (a, b) = gen::violating_pair(&mut rng, n, 4);
            let (ca, cb) = (oracle::page_chi(a.counts()), oracle::page_chi(b.counts()));
            let expected = if n % 2 == 0 {
                CalculusError::ChiMismatch { left: ca, right: cb }
            } else {
                CalculusError::ParityViolated { left: ca, right: cb }
            };
            let got = e.common_page(&OpenBookDoc::natural(&a), &OpenBookDoc::natural(&b)).map(|c| c.profile);
            bad_tally.record(got.as_ref().err() == Some(&expected), || format!("n={n} {a} vs {b}: {got:?}"));
        }
    }
    out.push(ok_tally.check());
    out.push(bad_tally.check());
    out
}

const TAU: &str = "tau_k maps lambda to lambda, mu to lambda + sign mu, and fixes degree n-k";

pub(crate) fn distinguish(e: &dyn Engine, _seed: u64, _sizes: Sizes) -> Vec<Check> {
    let suite = "distinguish";
    let witness = |n, k| e.distinguish(n, k, 1).map(|d| (d.distinct, d.witness_degree));
    let mut out = vec![
        example(suite, "n5-k2", "tau_2 and tau_4 differ on H_1", "Ok((true, Some(1)))", format!("{:?}", witness(5, 2))),
        example(suite, "n4-k2", "tau_2 and tau_3 differ on H_1", "Ok((true, Some(1)))", format!("{:?}", witness(4, 2))),
        example(suite, "n12-k6", "tau_6 and tau_7 differ", "Ok((true, Some(5)))", format!("{:?}", witness(12, 6))),
    ];
    let mut distinct = Tally::new(suite, "all-pairs", "tau_k and tau_{n-k+1} are not isotopic");
    let mut images = Tally::new(suite, "generator-images", TAU);
    for n in 4..=12 {
        for k in 2..=n / 2 {
            for sign in [1i64, -1] {
                let d = e.distinguish(n, k, sign);
                distinct.record(d.as_ref().is_ok_and(|d| d.distinct), || format!("n={n} k={k} sign={sign}: {d:?}"));
                for kk in [k, n - k + 1] {
                    let (lower, upper) = (kk - 1, n - kk);
                    if lower == upper {
                        continue;
                    }
                    let lo = e.tau_action(n, kk, lower, sign).map(|t| t.matrix.to_rows());
                    let hi = e.tau_action(n, kk, upper, sign).map(|t| t.matrix.to_rows());
                    let ok = lo == Ok(vec![vec![1, 1], vec![0, sign]]) && hi == Ok(vec![vec![1, 0], vec![0, 1]]);
                    images.record(ok, || format!("n={n} k={kk} sign={sign}: {lo:?} / {hi:?}"));
                }
            }
        }
    }
    out.push(distinct.check());
    out.push(images.check());
    out
}

const SNF: &str = "Smith normal form U A V = D with the minor-gcd invariant factors";

fn natural_complex(n: usize, mu: &[u64]) -> ChainComplex {
    let mut ranks = vec![1usize];
    ranks.extend(mu.iter().map(|&c| c as usize));
    ranks.push(0);
    debug_assert_eq!(ranks.len(), n);
    ChainComplex::zero_boundaries(ranks)
}

pub(crate) fn homology(e: &dyn Engine, seed: u64, sizes: Sizes) -> Vec<Check> {
    let suite = "homology";
    let mut out = Vec::new();
    let two = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).expect("square");
    out.push(example(
        suite,
        "2468",
        SNF,
        "Ok([2, 4])",
        format!("{:?}", e.smith_normal_form(&two).map(|f| vec![f.d[(0, 0)], f.d[(1, 1)]])),
    ));
    let s3 = homology_of_complex(&chain_complex(fixtures::hopf_sphere().page())).map(|h| h.to_string());
    out.push(example(suite, "hopf-sphere", "the (1,1,1,1) decomposition is S^3", "Ok(\"H_0 = Z, H_1 = 0, H_2 = 0, H_3 = Z\")", format!("{s3:?}")));

    let mut rng = gen::rng(seed);
    let mut t = Tally::new(suite, "random-matrices", SNF);
    for _ in 0..sizes.matrices {
        let a = gen::matrix(&mut rng, 6, 9);
        let expected = oracle::minor_gcd_divisors(&a.to_rows());
        let res = e.smith_normal_form(&a);
        let verdict = res.as_ref().map_err(ToString::to_string).and_then(|f| {
            let ua = oracle::product(&oracle::wide(f.u.to_rows()), &oracle::wide(a.to_rows())).ok_or("U A shape")?;
            let uav = oracle::product(&ua, &oracle::wide(f.v.to_rows())).ok_or("U A V shape")?;
            let d = oracle::wide(f.d.to_rows());
            if uav != d {
                return Err("U A V differs from D".into());
            }
            let units = [f.u.determinant(), f.v.determinant()];
            if !units.iter().all(|d| matches!(d, Ok(1) | Ok(-1))) {
                return Err("U or V is not unimodular".into());
            }
            let r = f.d.rows().min(f.d.cols());
            let diag: Vec<i64> = (0..r).map(|i| f.d[(i, i)]).collect();
            let off = (0..f.d.rows()).any(|i| (0..f.d.cols()).any(|j| i != j && f.d[(i, j)] != 0));
            let nonzero: Vec<i64> = diag.iter().copied().filter(|&x| x != 0).collect();
            if off || nonzero != expected || diag[nonzero.len()..].iter().any(|&x| x != 0) {
                return Err(format!("diagonal {diag:?}, invariant factors {expected:?}"));
            }
            Ok(())
        });
        t.record(verdict.is_ok(), || format!("{a}: {verdict:?}"));
    }
    out.push(t.check());

    let mut closed = Tally::new(suite, "closed-forms", "closed-form homology of natural pages, doubles and open books");
    for _ in 0..60 {
        let n = rng.gen_range(3..=8);
        let p = gen::profile(&mut rng, n, 3);
        let doc = OpenBookDoc::natural(&p);
        let page = homology_of_complex(&natural_complex(n, p.counts()));
        let dbl = homology_of_complex(&double_complex(doc.page()));
        let ob = homology_of_complex(&open_book_complex(doc.page()));
        let ok = page.as_ref() == Ok(&page_homology(&p))
            && dbl.as_ref() == Ok(&double_homology_natural(&p))
            && ob.as_ref() == Ok(&open_book_homology_trivial(&p))
            && ob.as_ref().map(|h| h.euler_characteristic()) == Ok(calculus::open_book_euler(&p));
        closed.record(ok, || format!("n={n} {p}"));
    }
    out.push(closed.check());
    out
}

const CANONICAL: &str = "almost canonical pages have no handle above ceil(n/2)";

pub(crate) fn almost_canonical(e: &dyn Engine, seed: u64, _sizes: Sizes) -> Vec<Check> {
    let suite = "almost-canonical";
    let mut rng = gen::rng(seed);
    let first = e.almost_canonical_selection(&natural(6, &[1, 1, 1, 1]));
    let mut out = vec![example(
        suite,
        "n6-1111",
        CANONICAL,
        "Ok([1, 2, 1, 0])",
        show(&calculus::exchange_page(&natural(6, &[1, 1, 1, 1]), &first).and_then(|(d, _)| mu_of(&d))),
    )];
    let mut t = Tally::new(suite, "exhaustive-n", CANONICAL);
    for n in 4usize..=10 {
        let bound = n.div_ceil(2usize);
        let mut pages: Vec<Vec<u64>> = vec![vec![1; n - 2]];
        for i in 0..n - 2 {
            let mut unit = vec![0; n - 2];
            unit[i] = 1;
            pages.push(unit);
        }
        for _ in 0..10 {
            pages.push(gen::profile(&mut rng, n, 4).counts().to_vec());
        }
        for mu in pages {
            let doc = natural(n, &mu);
            let sel = e.almost_canonical_selection(&doc);
            let valid = is_valid_selection(doc.page(), &sel, n).map(|c| c == SelectionCheck::Valid);
            let top = calculus::exchange_page(&doc, &sel)
                .map(|(d, _)| d.page().handles().iter().map(|h| h.index).max().unwrap_or(0));
            let ok = valid == Ok(true) && top.as_ref().is_ok_and(|&m| m <= bound);
            t.record(ok, || format!("n={n} {mu:?}: max index {}", show(&top)));
        }
    }
    out.push(t.check());
    out
}

pub(crate) fn round_trip(e: &dyn Engine, _seed: u64, _sizes: Sizes) -> Vec<Check> {
    let suite = "round-trip";
    let mut t = Tally::new(suite, "fixtures", "parse of serialize is the identity");
    let mut canon = Tally::new(suite, "canonical", "serialization is canonical and idempotent");
    for (name, doc) in fixtures::all() {
        let text = e.serialize_document(&doc);
        let back = parse_document(&text, UnknownFields::Reject).map(|p| p.document);
        t.record(back.as_ref() == Ok(&doc), || format!("{name}: {}", show(&back.as_ref().map(|_| ()))));
        if let Ok(b) = back {
            canon.record(e.serialize_document(&b) == text && serialize_document(&b) == text, || name.to_owned());
        }
    }
    vec![t.check(), canon.check()]
}
