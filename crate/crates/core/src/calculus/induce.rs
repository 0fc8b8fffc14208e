use serde::Serialize;

use super::{CalculusError, OpenBookDoc};
use crate::handle::{validate_decomposition, HandleDecomposition, HandleError, HandleId};
use crate::profile::{double_profile, ClosedProfile, Profile};

/// Half open book `hob(M)`: the same handles, one dimension up.
pub fn induce_hob(page: &HandleDecomposition) -> Result<HandleDecomposition, CalculusError> {
    if !page.boundary_nonempty() {
        return Err(CalculusError::ClosedPage);
    }
    let violations = validate_decomposition(page);
    if !violations.is_empty() {
        return Err(CalculusError::InvalidPage(violations));
    }
    let mut hob = page.clone();
    hob.set_dimension(page.dimension() + 1);
    Ok(hob)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrontCover {
    /// The monodromy fixes the cocore: the attaching sphere is the belt sphere.
    Identity,
    /// The front hemisphere is the image of the cocore under the named map.
    Image { monodromy: String },
}

/// Attaching sphere of the dual of a page handle in the open book.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualAttachment {
    pub handle: HandleId,
    pub index: usize,
    pub dual_index: usize,
    pub back_cover: String,
    pub front_cover: FrontCover,
}

impl DualAttachment {
    pub fn describe(&self) -> String {
        match &self.front_cover {
            FrontCover::Identity => format!("{} u id({})", self.back_cover, self.back_cover),
            FrontCover::Image { monodromy } => format!("{} u {monodromy}({})", self.back_cover, self.back_cover),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedOpenBook {
    pub profile: ClosedProfile,
    pub dual_attachments: Vec<DualAttachment>,
}

fn attachment(doc: &OpenBookDoc, id: &HandleId) -> Result<DualAttachment, CalculusError> {
    let h = doc.page().handle(id).ok_or_else(|| HandleError::UnknownHandle(id.clone()))?;
    let front_cover = if h.monodromy_trivial {
        FrontCover::Identity
    } else {
        FrontCover::Image { monodromy: doc.monodromy().name() }
    };
    Ok(DualAttachment {
        handle: h.id.clone(),
        index: h.index,
        dual_index: doc.n() - h.index,
        back_cover: format!("coc({})", h.id),
        front_cover,
    })
}

/// Counts of the induced decomposition of `Ob(M, φ)`: `hob(M)` followed by its dual.
pub fn induce_open_book(doc: &OpenBookDoc) -> Result<InducedOpenBook, CalculusError> {
    let n = doc.n();
    doc.profile()?;
    let hob = induce_hob(doc.page())?;
    let profile = double_profile(&hob.counts(), n)?;
    let dual_attachments = doc
        .page()
        .handles()
        .iter()
        .map(|h| attachment(doc, &h.id))
        .collect::<Result<_, _>>()?;
    Ok(InducedOpenBook { profile, dual_attachments })
}

/// `χ(Ob(M, φ))`: twice the page characteristic for even `n`, zero for odd `n`.
pub fn open_book_euler(p: &Profile) -> i64 {
    if p.n().is_multiple_of(2) {
        2 * p.euler_characteristic()
    } else {
        0
    }
}

pub fn dual_attaching_description(doc: &OpenBookDoc, id: &HandleId) -> Result<DualAttachment, CalculusError> {
    attachment(doc, id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handle::Handle;
    use crate::monodromy::MonodromySpec;

    fn natural(n: usize, mu: &[u64]) -> OpenBookDoc {
        OpenBookDoc::natural(&Profile::new(n, mu.to_vec()).unwrap())
    }

    #[test]
    fn hob_keeps_handles() {
        let annulus = HandleDecomposition::disk(2).with_handle(Handle::new("h1", 1, true));
        let hob = induce_hob(&annulus).unwrap();
        assert_eq!(hob.dimension(), 3);
        assert_eq!(hob.counts(), vec![1, 1, 0, 0]);
        let closed = HandleDecomposition::new(2, false).with_handle(Handle::new("h0", 0, true));
        assert_eq!(induce_hob(&closed), Err(CalculusError::ClosedPage));
    }

    #[test]
    fn induced_profiles() {
        assert_eq!(induce_open_book(&natural(5, &[1, 2, 3])).unwrap().profile.counts(), &[1, 1, 5, 5, 1, 1]);
        assert_eq!(induce_open_book(&natural(3, &[1])).unwrap().profile.counts(), &[1, 1, 1, 1]);
        assert_eq!(induce_open_book(&natural(4, &[0, 1])).unwrap().profile.counts(), &[1, 0, 2, 0, 1]);
    }

    #[test]
    fn euler() {
        assert_eq!(open_book_euler(&Profile::new(4, vec![0, 1]).unwrap()), 4);
        assert_eq!(open_book_euler(&Profile::new(5, vec![3, 1, 4]).unwrap()), 0);
        assert_eq!(open_book_euler(&Profile::new(4, vec![2, 1]).unwrap()), 0);
    }

    #[test]
    fn dual_attachments() {
        let doc = natural(3, &[1]);
        let d = dual_attaching_description(&doc, &"h1_1".into()).unwrap();
        assert_eq!(d.front_cover, FrontCover::Identity);
        assert_eq!(d.dual_index, 2);

        let page = HandleDecomposition::disk(2).with_handle(Handle::new("h1", 1, false));
        let twisted = OpenBookDoc::new(3, page, MonodromySpec::annotated(Some("tau".into()))).unwrap();
        let d = dual_attaching_description(&twisted, &"h1".into()).unwrap();
        assert_eq!(d.front_cover, FrontCover::Image { monodromy: "tau".into() });
        assert_eq!(d.describe(), "coc(h1) u tau(coc(h1))");
        assert!(dual_attaching_description(&twisted, &"nope".into()).is_err());
    }
}
