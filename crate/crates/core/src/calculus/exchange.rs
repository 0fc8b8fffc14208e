use std::collections::BTreeSet;

use serde::Serialize;

use super::{induce_open_book, CalculusError, Move, MoveLog, MoveRecord, OpenBookDoc};
use crate::handle::{validate_allowing_top, Handle, HandleDecomposition, HandleId};
use crate::monodromy::MonodromySpec;
use crate::profile::ClosedProfile;
use crate::selection::{is_valid_selection, Selection, SelectionCheck};

pub(crate) struct Exchanged {
    pub page: HandleDecomposition,
    pub monodromy: MonodromySpec,
    pub action: Move,
}

/// Exchange on a page that may carry transient top handles.
pub(crate) fn exchange_raw(
    n: usize,
    page: &HandleDecomposition,
    monodromy: &MonodromySpec,
    selection: &Selection,
) -> Result<Exchanged, CalculusError> {
    let violations = validate_allowing_top(page);
    if !violations.is_empty() {
        return Err(CalculusError::InvalidPage(violations));
    }
    if let SelectionCheck::Invalid(w) = is_valid_selection(page, selection, n)? {
        return Err(w.into());
    }
    let chosen: Vec<&Handle> = page.handles().iter().filter(|h| selection.contains(&h.id)).collect();
    if let Some(h) = chosen.iter().find(|h| !h.monodromy_trivial) {
        return Err(CalculusError::NotExchangeable(h.id.clone()));
    }
    let natural = page.is_natural() && monodromy.is_identity();
    let ids: Vec<HandleId> = chosen.iter().map(|h| h.id.clone()).collect();
    let indices: Vec<usize> = chosen.iter().map(|h| h.index).collect();
    let labels: Vec<Option<String>> = chosen.iter().map(|h| h.boundary.clone()).collect();

    let mut out = page.clone();
    out.remove_handles(&ids.iter().cloned().collect::<BTreeSet<_>>());
    for ((id, &k), label) in ids.iter().zip(&indices).zip(labels) {
        let fresh = out.fresh_id(&format!("{id}^x"));
        let mut h = Handle::new(fresh.as_str(), n - k, natural);
        h.boundary = label;
        out.insert_in_order(h);
    }

    let mut mono = monodromy.clone();
    if !ids.is_empty() && !natural {
        mono = mono.into_annotated();
        for &k in &indices {
            mono.forget_degree(k);
            mono.forget_degree(n - k);
        }
    }
    Ok(Exchanged { page: out, monodromy: mono, action: Move::Exchange { ids, indices } })
}

/// Replaces each selected `k`-handle by an `(n-k)`-handle attached to the 0-handle.
pub fn exchange_page(doc: &OpenBookDoc, selection: &Selection) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    let ex = exchange_raw(doc.n(), doc.page(), doc.monodromy(), selection)?;
    let record = MoveRecord::between(ex.action, doc.page(), &ex.page);
    let out = OpenBookDoc::rebuilt(doc.n(), ex.page, ex.monodromy)?;
    Ok((out, MoveLog::single(record)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Commutation {
    pub before: ClosedProfile,
    pub after: ClosedProfile,
    pub holds: bool,
}

/// Induced profiles before and after an exchange.
pub fn verify_exchange_commutation(doc: &OpenBookDoc, selection: &Selection) -> Result<Commutation, CalculusError> {
    let before = induce_open_book(doc)?.profile;
    let (exchanged, _) = exchange_page(doc, selection)?;
    let after = induce_open_book(&exchanged)?.profile;
    Ok(Commutation { holds: before == after, before, after })
}

/// Every handle of index above `⌈n/2⌉`.
pub fn almost_canonical_selection(doc: &OpenBookDoc) -> Selection {
    let bound = doc.n().div_ceil(2);
    Selection::new(doc.page().handles().iter().filter(|h| h.index > bound).map(|h| h.id.clone()))
}

/// Exchanges all handles of index `2..=n-2` of a page with identity monodromy.
pub fn normal_form(doc: &OpenBookDoc) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    if !doc.monodromy().is_identity() {
        return Err(CalculusError::NonTrivialMonodromy);
    }
    let n = doc.n();
    if n == 3 {
        return Ok((doc.clone(), MoveLog::new()));
    }
    let selection = Selection::new(
        doc.page()
            .handles()
            .iter()
            .filter(|h| (2..=n - 2).contains(&h.index))
            .map(|h| h.id.clone()),
    );
    let ex = exchange_raw(n, doc.page(), doc.monodromy(), &selection)?;
    let mut page = ex.page;
    page.retain_relations(|_, _| false);
    let mut monodromy = ex.monodromy;
    if !monodromy.is_identity() && monodromy.label.is_none() {
        monodromy.label = Some("sigma".to_owned());
    }
    let record = MoveRecord::between(Move::NormalForm, doc.page(), &page);
    let out = OpenBookDoc::rebuilt(n, page, monodromy)?;
    Ok((out, MoveLog::single(record)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::MonodromyKind;
    use crate::profile::Profile;

    fn natural(n: usize, mu: &[u64]) -> OpenBookDoc {
        OpenBookDoc::natural(&Profile::new(n, mu.to_vec()).unwrap())
    }

    fn mu(doc: &OpenBookDoc) -> Vec<u64> {
        doc.profile().unwrap().counts().to_vec()
    }

    #[test]
    fn exchange_s3_summand() {
        let doc = natural(5, &[0, 0, 1]);
        let (out, log) = exchange_page(&doc, &Selection::new(["h3_1"])).unwrap();
        assert_eq!(mu(&out), vec![0, 1, 0]);
        assert!(out.monodromy().is_identity());
        assert_eq!(log.len(), 1);
        assert_eq!(log.replay(5, &doc.page().counts()).unwrap(), out.page().counts());
    }

    #[test]
    fn empty_exchange_is_identity() {
        let doc = natural(5, &[2, 1, 3]);
        let (out, _) = exchange_page(&doc, &Selection::empty()).unwrap();
        assert_eq!(out, doc);
    }

    #[test]
    fn exchange_all_upper_handles() {
        let doc = natural(5, &[2, 1, 3]);
        let sel = Selection::new(doc.page().handles().iter().filter(|h| h.index >= 2).map(|h| h.id.clone()));
        let (out, _) = exchange_page(&doc, &sel).unwrap();
        assert_eq!(mu(&out), vec![2, 3, 1]);
    }

    #[test]
    fn non_natural_input_flags_new_handles() {
        let page = HandleDecomposition::disk(4)
            .with_handle(Handle::new("a", 2, true))
            .with_handle(Handle::new("b", 3, true))
            .with_dependency("b", "a")
            .with_incidence("b", "a", 1);
        let doc = OpenBookDoc::trivial(5, page).unwrap();
        let (out, _) = exchange_page(&doc, &Selection::new(["b"])).unwrap();
        assert_eq!(out.monodromy().kind, MonodromyKind::Annotated);
        assert!(!out.page().handle(&"b^x".into()).unwrap().monodromy_trivial);
        // a selection that is not upward closed
        assert!(matches!(
            exchange_page(&doc, &Selection::new(["a"])),
            Err(CalculusError::Selection(_))
        ));
    }

    #[test]
    fn commutation_examples() {
        let c = verify_exchange_commutation(&natural(5, &[0, 0, 1]), &Selection::new(["h3_1"])).unwrap();
        assert!(c.holds);
        assert_eq!(c.before.counts(), &[1, 0, 1, 1, 0, 1]);
        let c = verify_exchange_commutation(&natural(4, &[1, 1]), &Selection::new(["h2_1"])).unwrap();
        assert!(c.holds);
        assert_eq!(c.after.counts(), &[1, 1, 2, 1, 1]);
    }

    #[test]
    fn almost_canonical() {
        let doc = natural(6, &[1, 1, 1, 1]);
        let sel = almost_canonical_selection(&doc);
        assert_eq!(sel, Selection::new(["h4_1"]));
        let (out, _) = exchange_page(&doc, &sel).unwrap();
        assert_eq!(mu(&out), vec![1, 2, 1, 0]);
        assert!(almost_canonical_selection(&natural(3, &[4])).is_empty());
    }

    #[test]
    fn normal_forms() {
        let (out, log) = normal_form(&natural(6, &[1, 2, 0, 0])).unwrap();
        assert_eq!(mu(&out), vec![1, 0, 0, 2]);
        assert_eq!(log.records()[0].action, Move::NormalForm);
        let (out, _) = normal_form(&natural(5, &[3, 1, 2])).unwrap();
        assert_eq!(mu(&out), vec![3, 2, 1]);
        assert!(out.monodromy().is_identity());
        let (out, log) = normal_form(&natural(3, &[2])).unwrap();
        assert!(log.is_empty());
        assert_eq!(mu(&out), vec![2]);
    }
}
