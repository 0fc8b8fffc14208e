use super::{CalculusError, Move, MoveLog, MoveRecord, OpenBookDoc};
use crate::handle::Handle;
use crate::monodromy::{MonodromySpec, Sign};

fn is_bare_disk(doc: &OpenBookDoc) -> bool {
    doc.page().handles().len() == 1 && doc.monodromy().is_identity()
}

fn summand(doc_page: &crate::handle::HandleDecomposition, base: &str, index: usize, boundary: Option<&str>) -> Handle {
    let mut h = Handle::new(doc_page.fresh_id(base).as_str(), index, false);
    h.boundary = boundary.map(str::to_owned);
    h
}

pub fn stabilize_k(doc: &OpenBookDoc, k: usize) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    stabilize_k_along(doc, k, None)
}

/// `k`-stabilization: adds `S^{k-1} × D^{n-k}` and `S^{n-k} × D^{k-1}` summands,
/// optionally recording which boundary component they are attached along.
pub fn stabilize_k_along(
    doc: &OpenBookDoc,
    k: usize,
    boundary: Option<&str>,
) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    let n = doc.n();
    if k < 2 || k + 1 > n {
        return Err(CalculusError::StabilizationIndex { n, k, max: n - 1 });
    }
    let mut page = doc.page().clone();
    let lo = summand(&page, &format!("tau{k}.lo"), k - 1, boundary);
    page.insert_in_order(lo);
    let hi = summand(&page, &format!("tau{k}.hi"), n - k, boundary);
    page.insert_in_order(hi);

    let monodromy = if is_bare_disk(doc) {
        MonodromySpec::tau(k, Sign::Plus)
    } else {
        let mut m = doc.monodromy().clone().into_annotated();
        m.extend_identity(k - 1, 1);
        m.extend_identity(n - k, 1);
        m
    };
    let record = MoveRecord::between(Move::StabilizeK { k }, doc.page(), &page);
    Ok((OpenBookDoc::rebuilt(n, page, monodromy)?, MoveLog::single(record)))
}

/// Adds one `S^l × D^l` summand to a `2l`-dimensional page.
pub fn stabilize_middle(doc: &OpenBookDoc) -> Result<(OpenBookDoc, MoveLog), CalculusError> {
    let n = doc.n();
    let dim = n - 1;
    if dim % 2 == 1 {
        return Err(CalculusError::OddDimensionalPage(dim));
    }
    let l = dim / 2;
    let mut page = doc.page().clone();
    let h = summand(&page, "mid", l, None);
    page.insert_in_order(h);
    let monodromy = if is_bare_disk(doc) {
        MonodromySpec::annotated(Some("tau".to_owned()))
    } else {
        let mut m = doc.monodromy().clone().into_annotated();
        m.extend_identity(l, 1);
        m
    };
    let record = MoveRecord::between(Move::StabilizeMiddle, doc.page(), &page);
    Ok((OpenBookDoc::rebuilt(n, page, monodromy)?, MoveLog::single(record)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::MonodromyKind;
    use crate::profile::Profile;

    fn disk(n: usize) -> OpenBookDoc {
        OpenBookDoc::natural(&Profile::disk(n).unwrap())
    }

    fn mu(doc: &OpenBookDoc) -> Vec<u64> {
        doc.profile().unwrap().counts().to_vec()
    }

    #[test]
    fn k_stabilizations() {
        let (out, log) = stabilize_k(&disk(5), 3).unwrap();
        assert_eq!(mu(&out), vec![0, 2, 0]);
        let r = &log.records()[0];
        assert_eq!((r.chi_before, r.chi_after), (1, 3));
        assert_eq!(out.monodromy().kind, MonodromyKind::Tau { k: 3, sign: Sign::Plus });
        assert!(out.page().handles().iter().skip(1).all(|h| !h.monodromy_trivial));

        let (out, log) = stabilize_k(&disk(4), 2).unwrap();
        assert_eq!(mu(&out), vec![1, 1]);
        assert_eq!(log.records()[0].chi_after, 1);

        let (out, _) = stabilize_k(&disk(3), 2).unwrap();
        assert_eq!(mu(&out), vec![2]);

        assert!(matches!(stabilize_k(&disk(5), 5), Err(CalculusError::StabilizationIndex { .. })));
        assert!(matches!(stabilize_k(&disk(5), 1), Err(CalculusError::StabilizationIndex { .. })));
    }

    #[test]
    fn repeated_stabilization_gets_fresh_ids() {
        let (once, _) = stabilize_k(&disk(5), 3).unwrap();
        let (twice, _) = stabilize_k(&once, 3).unwrap();
        assert_eq!(mu(&twice), vec![0, 4, 0]);
        assert_eq!(twice.monodromy().kind, MonodromyKind::Annotated);
        assert_eq!(twice.monodromy().name(), "tau_3");
    }

    #[test]
    fn boundary_labels_are_kept() {
        let (out, _) = stabilize_k_along(&disk(4), 2, Some("B1")).unwrap();
        assert!(out.page().handles().iter().skip(1).all(|h| h.boundary.as_deref() == Some("B1")));
    }

    #[test]
    fn middle() {
        let (out, log) = stabilize_middle(&disk(3)).unwrap();
        assert_eq!(mu(&out), vec![1]);
        assert_eq!(log.records()[0].chi_after - log.records()[0].chi_before, -1);
        let (twice, _) = stabilize_middle(&out).unwrap();
        assert_eq!(mu(&twice), vec![2]);
        let (out, _) = stabilize_middle(&disk(5)).unwrap();
        assert_eq!(mu(&out), vec![0, 1, 0]);
        assert_eq!(stabilize_middle(&disk(4)).unwrap_err(), CalculusError::OddDimensionalPage(3));
    }
}
