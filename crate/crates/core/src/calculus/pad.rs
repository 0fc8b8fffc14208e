use std::collections::BTreeSet;

use thiserror::Error;

use super::exchange::exchange_raw;
use super::{CalculusError, Move, MoveLog, MoveRecord, OpenBookDoc};
use crate::handle::{validate_decomposition, Handle, HandleDecomposition, HandleError, HandleId};
use crate::selection::Selection;

/// The precondition clause that blocks a cancellation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CancelError {
    #[error("index mismatch: {upper} has index {upper_index}, {lower} has index {lower_index}; need a difference of one")]
    IndexMismatch { upper: HandleId, upper_index: usize, lower: HandleId, lower_index: usize },
    #[error("the 0-handle {0} cannot be canceled")]
    ZeroHandle(HandleId),
    #[error("incidence not +-1: incidence({upper}, {lower}) = {value}")]
    IncidenceNotUnit { upper: HandleId, lower: HandleId, value: i64 },
    #[error("other incoming dependency: {other} also depends on {lower}")]
    OtherIncoming { lower: HandleId, other: HandleId },
    #[error("other outgoing dependency: {upper} also depends on {other}")]
    OtherOutgoing { upper: HandleId, other: HandleId },
    #[error("something depends on the upper handle: {other} depends on {upper}")]
    DependsOnUpper { upper: HandleId, other: HandleId },
}

/// Removes the canceling pair `(a, b)` where `a` is the upper handle.
pub fn cancel_pair(h: &HandleDecomposition, a: &HandleId, b: &HandleId) -> Result<HandleDecomposition, CalculusError> {
    let violations = validate_decomposition(h);
    if !violations.is_empty() {
        return Err(CalculusError::InvalidPage(violations));
    }
    let ha = h.handle(a).ok_or_else(|| HandleError::UnknownHandle(a.clone()))?;
    let hb = h.handle(b).ok_or_else(|| HandleError::UnknownHandle(b.clone()))?;
    if ha.index != hb.index + 1 {
        return Err(CancelError::IndexMismatch {
            upper: a.clone(),
            upper_index: ha.index,
            lower: b.clone(),
            lower_index: hb.index,
        }
        .into());
    }
    if hb.index == 0 {
        return Err(CancelError::ZeroHandle(b.clone()).into());
    }
    let value = h.incidence().get(&(a.clone(), b.clone())).copied().unwrap_or(0);
    if value.abs() != 1 {
        return Err(CancelError::IncidenceNotUnit { upper: a.clone(), lower: b.clone(), value }.into());
    }
    for (from, to) in h.dependencies() {
        if to == b && from != a {
            return Err(CancelError::OtherIncoming { lower: b.clone(), other: from.clone() }.into());
        }
        if from == a && to != b {
            return Err(CancelError::OtherOutgoing { upper: a.clone(), other: to.clone() }.into());
        }
        if to == a {
            return Err(CancelError::DependsOnUpper { upper: a.clone(), other: from.clone() }.into());
        }
    }
    let mut out = h.clone();
    out.remove_handles(&BTreeSet::from([a.clone(), b.clone()]));
    Ok(out)
}

/// Document-level cancellation with a logged move.
pub fn cancel(doc: &OpenBookDoc, a: &HandleId, b: &HandleId) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    let page = cancel_pair(doc.page(), a, b)?;
    let index = doc.page().require(a)?.index;
    let mut monodromy = doc.monodromy().clone();
    if !monodromy.is_identity() {
        monodromy = monodromy.into_annotated();
        monodromy.forget_degree(index);
        monodromy.forget_degree(index - 1);
    }
    let action = Move::Cancel { upper: a.clone(), lower: b.clone(), index };
    let record = MoveRecord::between(action, doc.page(), &page);
    Ok((OpenBookDoc::rebuilt(doc.n(), page, monodromy)?, MoveLog::single(record)))
}

/// Pad without the page range check; `j + 1` may reach the top index.
fn pad_raw(h: &HandleDecomposition, j: usize) -> (HandleDecomposition, HandleId, HandleId) {
    let mut out = h.clone();
    let lo = out.fresh_id(&format!("pad{j}.lo"));
    out.insert_in_order(Handle::new(lo.as_str(), j, true));
    let hi = out.fresh_id(&format!("pad{j}.hi"));
    out.insert_in_order(Handle::new(hi.as_str(), j + 1, true));
    out.add_dependency(hi.clone(), lo.clone());
    out.add_incidence(hi.clone(), lo.clone(), 1);
    (out, lo, hi)
}

/// Adds a canceling `(j, j+1)` pair with incidence `+1` inside a boundary collar.
pub fn pad_canceling_pair(h: &HandleDecomposition, j: usize) -> Result<HandleDecomposition, CalculusError> {
    let violations = validate_decomposition(h);
    if !violations.is_empty() {
        return Err(CalculusError::InvalidPage(violations));
    }
    let max = h.dimension().saturating_sub(2);
    if j < 1 || j > max {
        return Err(CalculusError::PadIndex { j, min: 1, max });
    }
    Ok(pad_raw(h, j).0)
}

pub fn pad(doc: &OpenBookDoc, j: usize) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    let page = pad_canceling_pair(doc.page(), j)?;
    let mut monodromy = doc.monodromy().clone();
    if !monodromy.is_identity() {
        monodromy = monodromy.into_annotated();
        monodromy.extend_identity(j, 1);
        monodromy.extend_identity(j + 1, 1);
    }
    let record = MoveRecord::between(Move::Pad { j }, doc.page(), &page);
    Ok((OpenBookDoc::rebuilt(doc.n(), page, monodromy)?, MoveLog::single(record)))
}

/// Pads at `(j, j+1)` and exchanges both new handles: the page gains one
/// handle each of index `n-j-1` and `n-j`.
pub fn pad_and_exchange(doc: &OpenBookDoc, j: usize) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    let n = doc.n();
    if j < 2 || j + 2 > n {
        return Err(CalculusError::PadIndex { j, min: 2, max: n - 2 });
    }
    let (padded, lo, hi) = pad_raw(doc.page(), j);
    let mut monodromy = doc.monodromy().clone();
    if !monodromy.is_identity() {
        monodromy = monodromy.into_annotated();
        monodromy.extend_identity(j, 1);
        monodromy.extend_identity(j + 1, 1);
    }
    let mut log = MoveLog::single(MoveRecord::between(Move::Pad { j }, doc.page(), &padded));
    let ex = exchange_raw(n, &padded, &monodromy, &Selection::new([lo, hi]))?;
    log.push(MoveRecord::between(ex.action, &padded, &ex.page));
    Ok((OpenBookDoc::rebuilt(n, ex.page, ex.monodromy)?, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    fn natural(n: usize, mu: &[u64]) -> OpenBookDoc {
        OpenBookDoc::natural(&Profile::new(n, mu.to_vec()).unwrap())
    }

    fn mu(doc: &OpenBookDoc) -> Vec<u64> {
        doc.profile().unwrap().counts().to_vec()
    }

    fn canceling_disk() -> HandleDecomposition {
        HandleDecomposition::disk(4)
            .with_handle(Handle::new("b", 2, true))
            .with_handle(Handle::new("a", 3, true))
            .with_dependency("a", "b")
            .with_incidence("a", "b", -1)
    }

    #[test]
    fn cancels_to_the_disk() {
        let out = cancel_pair(&canceling_disk(), &"a".into(), &"b".into()).unwrap();
        assert_eq!(out, HandleDecomposition::disk(4));
    }

    #[test]
    fn cancel_clauses() {
        let h = canceling_disk().with_incidence("a", "b", 2);
        assert!(matches!(
            cancel_pair(&h, &"a".into(), &"b".into()),
            Err(CalculusError::Cancel(CancelError::IncidenceNotUnit { value: 2, .. }))
        ));
        assert!(matches!(
            cancel_pair(&canceling_disk(), &"b".into(), &"a".into()),
            Err(CalculusError::Cancel(CancelError::IndexMismatch { .. }))
        ));
        let h = canceling_disk().with_handle(Handle::new("c", 3, true)).with_dependency("c", "b");
        assert!(matches!(
            cancel_pair(&h, &"a".into(), &"b".into()),
            Err(CalculusError::Cancel(CancelError::OtherIncoming { .. }))
        ));
        let h = HandleDecomposition::disk(4)
            .with_handle(Handle::new("c", 2, true))
            .with_handle(Handle::new("b", 2, true))
            .with_handle(Handle::new("a", 3, true))
            .with_dependency("a", "b")
            .with_dependency("a", "c")
            .with_incidence("a", "b", 1);
        assert!(matches!(
            cancel_pair(&h, &"a".into(), &"b".into()),
            Err(CalculusError::Cancel(CancelError::OtherOutgoing { .. }))
        ));
        let h = HandleDecomposition::disk(5)
            .with_handle(Handle::new("b", 2, true))
            .with_handle(Handle::new("a", 3, true))
            .with_handle(Handle::new("c", 3, true))
            .with_dependency("a", "b")
            .with_dependency("c", "a")
            .with_incidence("a", "b", 1);
        assert!(matches!(
            cancel_pair(&h, &"a".into(), &"b".into()),
            Err(CalculusError::Cancel(CancelError::DependsOnUpper { .. }))
        ));
        let h = HandleDecomposition::disk(3)
            .with_handle(Handle::new("a", 1, true))
            .with_dependency("a", "h0")
            .with_incidence("a", "h0", 1);
        assert!(matches!(
            cancel_pair(&h, &"a".into(), &"h0".into()),
            Err(CalculusError::Cancel(CancelError::ZeroHandle(_)))
        ));
    }

    #[test]
    fn closed_s3_from_hopf_complex() {
        let ob = HandleDecomposition::new(3, false)
            .with_handle(Handle::new("h0", 0, true))
            .with_handle(Handle::new("h1", 1, true))
            .with_handle(Handle::new("h2", 2, true))
            .with_handle(Handle::new("h3", 3, true))
            .with_dependency("h2", "h1")
            .with_incidence("h2", "h1", 1);
        let out = cancel_pair(&ob, &"h2".into(), &"h1".into()).unwrap();
        assert_eq!(out.counts(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn padding() {
        let doc = natural(5, &[1, 0, 0]);
        let (out, log) = pad(&doc, 2).unwrap();
        assert_eq!(mu(&out), vec![1, 1, 1]);
        let r = &log.records()[0];
        assert_eq!(r.chi_before, r.chi_after);
        assert!(matches!(pad(&natural(3, &[0]), 1), Err(CalculusError::PadIndex { .. })));
        assert!(matches!(pad(&doc, 3), Err(CalculusError::PadIndex { .. })));
    }

    #[test]
    fn cancel_then_pad_restores_profile() {
        let doc = natural(5, &[1, 0, 0]);
        let (padded, _) = pad(&doc, 2).unwrap();
        let (back, _) = cancel(&padded, &"pad2.hi".into(), &"pad2.lo".into()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn pad_exchange() {
        let (out, log) = pad_and_exchange(&natural(5, &[1, 0, 0]), 2).unwrap();
        assert_eq!(mu(&out), vec![1, 1, 1]);
        assert_eq!(log.len(), 2);
        let (out, log) = pad_and_exchange(&natural(5, &[0, 0, 0]), 3).unwrap();
        assert_eq!(mu(&out), vec![1, 1, 0]);
        // the intermediate page carries a transient top handle
        assert_eq!(log.records()[0].counts_after, vec![1, 0, 0, 1, 1]);
        assert_eq!(log.replay(5, &[1, 0, 0, 0, 0]).unwrap(), out.page().counts());
        assert!(log.records().iter().all(|r| r.chi_before == r.chi_after));
        assert!(matches!(pad_and_exchange(&natural(5, &[0, 0, 0]), 4), Err(CalculusError::PadIndex { .. })));
        assert!(matches!(pad_and_exchange(&natural(5, &[0, 0, 0]), 1), Err(CalculusError::PadIndex { .. })));
    }
}
