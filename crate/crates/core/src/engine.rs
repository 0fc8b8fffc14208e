//! The operations the self-test and the CLI dispatch through.
//!
//! [`Reference`] forwards to the library. [`Mutant`] breaks exactly one
//! operation, which is how the self-test proves that each suite detects a
//! fault in the operation it covers.

use std::collections::BTreeSet;

use crate::calculus::{self, CalculusError, CommonPage, Equalized, InducedOpenBook, Move, MoveLog, OpenBookDoc};
use crate::document::{self, Document};
use crate::handle::{Handle, HandleDecomposition};
use crate::homology::{self, Distinction, HomologyError, IntegerMatrix, SmithForm, TauAction};
use crate::profile::{ClosedProfile, Profile};
use crate::selection::Selection;

pub type Step = Result<(OpenBookDoc, MoveLog), CalculusError>;

pub trait Engine: Sync {
    fn induce_open_book(&self, doc: &OpenBookDoc) -> Result<InducedOpenBook, CalculusError> {
        calculus::induce_open_book(doc)
    }

    fn open_book_euler(&self, p: &Profile) -> i64 {
        calculus::open_book_euler(p)
    }

    fn exchange_page(&self, doc: &OpenBookDoc, selection: &Selection) -> Step {
        calculus::exchange_page(doc, selection)
    }

    fn normal_form(&self, doc: &OpenBookDoc) -> Step {
        calculus::normal_form(doc)
    }

    fn stabilize_k(&self, doc: &OpenBookDoc, k: usize) -> Step {
        calculus::stabilize_k(doc, k)
    }

    fn stabilize_middle(&self, doc: &OpenBookDoc) -> Step {
        calculus::stabilize_middle(doc)
    }

    fn equalize_handle_counts(&self, left: &Profile, right: &Profile) -> Result<Equalized, CalculusError> {
        calculus::equalize_handle_counts(left, right)
    }

    fn common_page(&self, x: &OpenBookDoc, y: &OpenBookDoc) -> Result<CommonPage, CalculusError> {
        calculus::common_page(x, y)
    }

    fn tau_action(&self, n: usize, k: usize, degree: usize, sign: i64) -> Result<TauAction, HomologyError> {
        homology::tau_action_on_double(n, k, degree, sign)
    }

    fn smith_normal_form(&self, a: &IntegerMatrix) -> Result<SmithForm, HomologyError> {
        homology::smith_normal_form(a)
    }

    fn almost_canonical_selection(&self, doc: &OpenBookDoc) -> Selection {
        calculus::almost_canonical_selection(doc)
    }

    fn serialize_document(&self, d: &Document) -> String {
        document::serialize_document(d)
    }

    /// Built on [`Engine::tau_action`].
    fn distinguish(&self, n: usize, k: usize, sign: i64) -> Result<Distinction, HomologyError> {
        homology::distinguish_with(n, k, sign, |n, k, d, s| self.tau_action(n, k, d, s))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Reference;

impl Engine for Reference {}

/// One targeted fault per self-test suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Induced counts lose the dual contribution.
    DropDualTerm,
    /// Open book Euler characteristic is always `2χ`.
    EulerIgnoresParity,
    /// Exchanged handles land one index too high.
    ExchangeIndexOffByOne,
    /// Normal form returns its input for `n ≥ 5`.
    NormalFormNoop,
    /// `k`-stabilization logs a wrong χ after the move.
    StabilizeWrongChi,
    /// Middle stabilization logs the move but leaves the page unchanged.
    MiddleDropsHandle,
    /// Equalization skips the last sweep position.
    EqualizeSkipsLast,
    /// Common page loses the last record of the right log.
    CommonPageDropsRecord,
    /// τ degree branches are swapped.
    TauSwapsDegrees,
    /// Smith form diagonal entries are swapped.
    SnfSwapsDiagonal,
    /// Almost canonical threshold is one too high.
    CanonicalThresholdOffByOne,
    /// Serialization drops the history.
    SerializeDropsHistory,
}

impl Mutation {
    pub const ALL: [Mutation; 12] = [
        Mutation::DropDualTerm,
        Mutation::EulerIgnoresParity,
        Mutation::ExchangeIndexOffByOne,
        Mutation::NormalFormNoop,
        Mutation::StabilizeWrongChi,
        Mutation::MiddleDropsHandle,
        Mutation::EqualizeSkipsLast,
        Mutation::CommonPageDropsRecord,
        Mutation::TauSwapsDegrees,
        Mutation::SnfSwapsDiagonal,
        Mutation::CanonicalThresholdOffByOne,
        Mutation::SerializeDropsHistory,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::DropDualTerm => "drop-dual-term",
            Mutation::EulerIgnoresParity => "euler-ignores-parity",
            Mutation::ExchangeIndexOffByOne => "exchange-index-off-by-one",
            Mutation::NormalFormNoop => "normal-form-noop",
            Mutation::StabilizeWrongChi => "stabilize-wrong-chi",
            Mutation::MiddleDropsHandle => "middle-drops-handle",
            Mutation::EqualizeSkipsLast => "equalize-skips-last",
            Mutation::CommonPageDropsRecord => "common-page-drops-record",
            Mutation::TauSwapsDegrees => "tau-swaps-degrees",
            Mutation::SnfSwapsDiagonal => "snf-swaps-diagonal",
            Mutation::CanonicalThresholdOffByOne => "canonical-threshold-off-by-one",
            Mutation::SerializeDropsHistory => "serialize-drops-history",
        }
    }

    /// The self-test suite that must catch this fault.
    pub fn suite(self) -> &'static str {
        match self {
            Mutation::DropDualTerm => "profile-law",
            Mutation::EulerIgnoresParity => "euler-law",
            Mutation::ExchangeIndexOffByOne => "exchange-commutation",
            Mutation::NormalFormNoop => "normal-form",
            Mutation::StabilizeWrongChi => "stabilization-bookkeeping",
            Mutation::MiddleDropsHandle => "hopf-relation",
            Mutation::EqualizeSkipsLast => "equalization",
            Mutation::CommonPageDropsRecord => "common-page",
            Mutation::TauSwapsDegrees => "distinguish",
            Mutation::SnfSwapsDiagonal => "homology",
            Mutation::CanonicalThresholdOffByOne => "almost-canonical",
            Mutation::SerializeDropsHistory => "round-trip",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Mutant(pub Mutation);

fn shift_exchanged(before: &OpenBookDoc, after: OpenBookDoc) -> Result<OpenBookDoc, CalculusError> {
    let old: BTreeSet<_> = before.page().handles().iter().map(|h| h.id.clone()).collect();
    let (n, page, monodromy) = after.into_parts();
    let mut handles: Vec<Handle> = page
        .handles()
        .iter()
        .cloned()
        .map(|mut h| {
            if !old.contains(&h.id) {
                h.index += 1;
            }
            h
        })
        .collect();
    handles.sort_by_key(|h| h.index);
    let shifted = HandleDecomposition::from_parts(
        page.dimension(),
        handles,
        page.dependencies().clone(),
        page.incidence().clone(),
        page.boundary_nonempty(),
    );
    OpenBookDoc::new(n, shifted, monodromy)
}

impl Engine for Mutant {
    fn induce_open_book(&self, doc: &OpenBookDoc) -> Result<InducedOpenBook, CalculusError> {
        let mut out = calculus::induce_open_book(doc)?;
        if self.0 == Mutation::DropDualTerm {
            let hob = calculus::induce_hob(doc.page())?;
            out.profile = ClosedProfile::new(doc.n(), hob.counts())?;
        }
        Ok(out)
    }

    fn open_book_euler(&self, p: &Profile) -> i64 {
        match self.0 {
            Mutation::EulerIgnoresParity => 2 * p.euler_characteristic(),
            _ => calculus::open_book_euler(p),
        }
    }

    fn exchange_page(&self, doc: &OpenBookDoc, selection: &Selection) -> Step {
        let (out, log) = calculus::exchange_page(doc, selection)?;
        match self.0 {
            Mutation::ExchangeIndexOffByOne => Ok((shift_exchanged(doc, out)?, log)),
            _ => Ok((out, log)),
        }
    }

    fn normal_form(&self, doc: &OpenBookDoc) -> Step {
        match self.0 {
            Mutation::NormalFormNoop if doc.n() >= 5 => Ok((doc.clone(), MoveLog::new())),
            _ => calculus::normal_form(doc),
        }
    }

    fn stabilize_k(&self, doc: &OpenBookDoc, k: usize) -> Step {
        let (out, mut log) = calculus::stabilize_k(doc, k)?;
        if self.0 == Mutation::StabilizeWrongChi {
            for r in log.records_mut() {
                r.chi_after += 1;
            }
        }
        Ok((out, log))
    }

    fn stabilize_middle(&self, doc: &OpenBookDoc) -> Step {
        let (out, log) = calculus::stabilize_middle(doc)?;
        match self.0 {
            Mutation::MiddleDropsHandle => Ok((doc.clone(), log)),
            _ => Ok((out, log)),
        }
    }

    fn equalize_handle_counts(&self, left: &Profile, right: &Profile) -> Result<Equalized, CalculusError> {
        let mut out = calculus::equalize_handle_counts(left, right)?;
        if self.0 == Mutation::EqualizeSkipsLast {
            let last = left.n().saturating_sub(3);
            for log in [&mut out.left_log, &mut out.right_log] {
                log.records_mut().retain(|r| r.action != Move::Pad { j: last });
            }
        }
        Ok(out)
    }

    fn common_page(&self, x: &OpenBookDoc, y: &OpenBookDoc) -> Result<CommonPage, CalculusError> {
        let mut out = calculus::common_page(x, y)?;
        if self.0 == Mutation::CommonPageDropsRecord {
            out.right_log.records_mut().pop();
        }
        Ok(out)
    }

    fn tau_action(&self, n: usize, k: usize, degree: usize, sign: i64) -> Result<TauAction, HomologyError> {
        if self.0 != Mutation::TauSwapsDegrees {
            return homology::tau_action_on_double(n, k, degree, sign);
        }
        let basis = homology::DoubleBasis::for_barbell(n, k)?;
        let swapped = if degree == basis.lower_degree {
            basis.upper_degree
        } else if degree == basis.upper_degree {
            basis.lower_degree
        } else {
            degree
        };
        let mut t = homology::tau_action_on_double(n, k, swapped, sign)?;
        t.degree = degree;
        Ok(t)
    }

    fn smith_normal_form(&self, a: &IntegerMatrix) -> Result<SmithForm, HomologyError> {
        let mut f = homology::smith_normal_form(a)?;
        if self.0 == Mutation::SnfSwapsDiagonal && f.d.rows() >= 2 && f.d.cols() >= 2 {
            let (x, y) = (f.d[(0, 0)], f.d[(1, 1)]);
            f.d[(0, 0)] = y;
            f.d[(1, 1)] = x;
        }
        Ok(f)
    }

    fn almost_canonical_selection(&self, doc: &OpenBookDoc) -> Selection {
        if self.0 != Mutation::CanonicalThresholdOffByOne {
            return calculus::almost_canonical_selection(doc);
        }
        let bound = doc.n().div_ceil(2) + 1;
        Selection::new(doc.page().handles().iter().filter(|h| h.index > bound).map(|h| h.id.clone()))
    }

    fn serialize_document(&self, d: &Document) -> String {
        match self.0 {
            Mutation::SerializeDropsHistory => {
                document::serialize_document(&Document { open_book: d.open_book.clone(), history: None })
            }
            _ => document::serialize_document(d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Mutation::ALL {
            assert_eq!(Mutation::from_name(m.name()), Some(m));
        }
        let suites: BTreeSet<_> = Mutation::ALL.iter().map(|m| m.suite()).collect();
        assert_eq!(suites.len(), 12);
    }

    #[test]
    fn tau_mutant_swaps_branches() {
        let t = Mutant(Mutation::TauSwapsDegrees).tau_action(5, 2, 1, 1).unwrap();
        assert!(t.matrix.is_identity());
        assert_eq!(t.degree, 1);
        assert!(!Reference.tau_action(5, 2, 1, 1).unwrap().matrix.is_identity());
    }
}
