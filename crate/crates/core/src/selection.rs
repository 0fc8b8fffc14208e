//! Selections of handles and their closure rule.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::handle::{HandleDecomposition, HandleId};

/// A set of handle ids. Validity is checked by [`is_valid_selection`], not on construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Selection(BTreeSet<HandleId>);

impl Selection {
    pub fn new<I, T>(ids: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<HandleId>,
    {
        Self(ids.into_iter().map(Into::into).collect())
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn ids(&self) -> &BTreeSet<HandleId> {
        &self.0
    }

    pub fn contains(&self, id: &HandleId) -> bool {
        self.0.contains(id)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// Why a selection fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SelectionWitness {
    /// A selected handle whose index lies outside `[2, n-1]`.
    IndexOutOfRange { id: HandleId, index: usize },
    /// `to` is selected, `from` depends on it but is not selected.
    NotClosed { from: HandleId, to: HandleId },
}

impl std::fmt::Display for SelectionWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::IndexOutOfRange { id, index } => {
                write!(f, "{id} has index {index}, outside the selectable range")
            }
            Self::NotClosed { from, to } => {
                write!(f, "{to} is selected but {from} depends on it and is not")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectionCheck {
    Valid,
    Invalid(SelectionWitness),
}

impl SelectionCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, Self::Valid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("selection names unknown handle {0}")]
    UnknownId(HandleId),
    #[error("invalid selection: {0}")]
    Invalid(SelectionWitness),
}

/// Checks the index range `[2, n-1]` and upward closure under dependencies.
pub fn is_valid_selection(
    h: &HandleDecomposition,
    selection: &Selection,
    n: usize,
) -> Result<SelectionCheck, SelectionError> {
    for id in selection.ids() {
        let handle = h.handle(id).ok_or_else(|| SelectionError::UnknownId(id.clone()))?;
        if handle.index < 2 || handle.index + 1 > n {
            return Ok(SelectionCheck::Invalid(SelectionWitness::IndexOutOfRange {
                id: id.clone(),
                index: handle.index,
            }));
        }
    }
    for (from, to) in h.dependencies() {
        if selection.contains(to) && !selection.contains(from) {
            return Ok(SelectionCheck::Invalid(SelectionWitness::NotClosed {
                from: from.clone(),
                to: to.clone(),
            }));
        }
    }
    Ok(SelectionCheck::Valid)
}

/// Transitive upward closure of `selection` under the dependency relation.
pub fn closure(h: &HandleDecomposition, selection: &Selection) -> Selection {
    let mut ids = selection.0.clone();
    loop {
        let added: Vec<HandleId> = h
            .dependencies()
            .iter()
            .filter(|(from, to)| ids.contains(to) && !ids.contains(from))
            .map(|(from, _)| from.clone())
            .collect();
        if added.is_empty() {
            return Selection(ids);
        }
        ids.extend(added);
    }
}

/// True when the selection is valid and every selected handle is monodromy-trivial.
/// The total dimension is read off the page as `dimension + 1`.
pub fn is_exchangeable(h: &HandleDecomposition, selection: &Selection) -> Result<bool, SelectionError> {
    match is_valid_selection(h, selection, h.dimension() + 1)? {
        SelectionCheck::Invalid(w) => Err(SelectionError::Invalid(w)),
        SelectionCheck::Valid => Ok(selection
            .ids()
            .iter()
            .filter_map(|id| h.handle(id))
            .all(|x| x.monodromy_trivial)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handle::Handle;
    use proptest::prelude::*;

    /// D^{n-1} with a canceling (k-1, k) pair.
    fn canceling(k: usize, n: usize) -> HandleDecomposition {
        HandleDecomposition::disk(n - 1)
            .with_handle(Handle::new("lo", k - 1, true))
            .with_handle(Handle::new("hi", k, true))
            .with_dependency("hi", "lo")
            .with_incidence("hi", "lo", 1)
    }

    #[test]
    fn upper_handle_of_canceling_pair_is_a_selection() {
        let h = canceling(3, 5);
        assert!(is_valid_selection(&h, &Selection::new(["hi"]), 5).unwrap().is_valid());
        assert!(is_valid_selection(&h, &Selection::new(["lo", "hi"]), 5).unwrap().is_valid());
    }

    #[test]
    fn lower_handle_alone_is_not() {
        let h = canceling(3, 5);
        assert_eq!(
            is_valid_selection(&h, &Selection::new(["lo"]), 5).unwrap(),
            SelectionCheck::Invalid(SelectionWitness::NotClosed { from: "hi".into(), to: "lo".into() })
        );
    }

    #[test]
    fn empty_and_out_of_range() {
        let h = canceling(2, 5);
        assert!(is_valid_selection(&h, &Selection::empty(), 5).unwrap().is_valid());
        assert_eq!(
            is_valid_selection(&h, &Selection::new(["lo"]), 5).unwrap(),
            SelectionCheck::Invalid(SelectionWitness::IndexOutOfRange { id: "lo".into(), index: 1 })
        );
        assert_eq!(
            is_valid_selection(&h, &Selection::new(["nope"]), 5),
            Err(SelectionError::UnknownId("nope".into()))
        );
    }

    #[test]
    fn exchangeability_reads_flags() {
        let h = canceling(3, 5);
        assert!(is_exchangeable(&h, &Selection::new(["hi"])).unwrap());
        let flagged = HandleDecomposition::disk(4).with_handle(Handle::new("x", 2, false));
        assert!(!is_exchangeable(&flagged, &Selection::new(["x"])).unwrap());
        assert!(matches!(
            is_exchangeable(&h, &Selection::new(["lo"])),
            Err(SelectionError::Invalid(_))
        ));
    }

    fn chain(len: usize) -> HandleDecomposition {
        // indices 2,2,3,3,... with dependencies on earlier handles
        let mut h = HandleDecomposition::disk(len + 3);
        for i in 0..len {
            h = h.with_handle(Handle::new(format!("x{i}"), 2 + i / 2, true));
        }
        h
    }

    proptest! {
        #[test]
        fn closure_is_always_a_selection(
            len in 1usize..8,
            edges in proptest::collection::vec((0usize..8, 0usize..8), 0..12),
            picks in proptest::collection::vec(0usize..8, 0..5),
        ) {
            let mut h = chain(len);
            for (a, b) in edges {
                let (a, b) = (a % len, b % len);
                if a > b {
                    h = h.with_dependency(format!("x{a}"), format!("x{b}"));
                }
            }
            let pick = Selection::new(picks.into_iter().map(|p| format!("x{}", p % len)));
            let closed = closure(&h, &pick);
            let n = h.dimension() + 1;
            prop_assert!(is_valid_selection(&h, &closed, n).unwrap().is_valid());
        }
    }
}
