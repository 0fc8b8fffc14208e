//! Moves on open book documents. Every transforming operation returns the
//! new document together with a [`MoveLog`] describing the count changes.

mod common;
mod exchange;
mod induce;
mod movelog;
mod pad;
mod stabilize;

use thiserror::Error;

use crate::handle::{validate_decomposition, HandleDecomposition, HandleError, HandleId, Violation};
use crate::monodromy::{MonodromySpec, MonodromyViolation};
use crate::profile::{profile_of, Profile, ProfileError};
use crate::selection::{SelectionError, SelectionWitness};

pub use common::{common_page, equalize_documents, equalize_handle_counts, CommonPage, Equalized, Side};
pub use exchange::{
    almost_canonical_selection, exchange_page, normal_form, verify_exchange_commutation, Commutation,
};
pub use induce::{
    dual_attaching_description, induce_hob, induce_open_book, open_book_euler, DualAttachment, FrontCover,
    InducedOpenBook,
};
pub use movelog::{Move, MoveLog, MoveRecord, ReplayError};
pub use pad::{cancel, cancel_pair, pad, pad_and_exchange, pad_canceling_pair, CancelError};
pub use stabilize::{stabilize_k, stabilize_k_along, stabilize_middle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("total dimension n = {0} is below 3")]
    TotalDimension(usize),
    #[error("page has dimension {found}, expected n - 1 = {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid page: {}", join(.0))]
    InvalidPage(Vec<Violation>),
    #[error("monodromy does not fit the page: {}", join(.0))]
    Monodromy(Vec<MonodromyViolation>),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Handle(#[from] HandleError),
    #[error("selection is not exchangeable: {0} is not monodromy-trivial")]
    NotExchangeable(HandleId),
    #[error("page boundary is empty")]
    ClosedPage,
    #[error("k = {k} outside [2, {max}] for n = {n}")]
    StabilizationIndex { n: usize, k: usize, max: usize },
    #[error("middle stabilization needs an even-dimensional page, got dimension {0}")]
    OddDimensionalPage(usize),
    #[error("cannot cancel: {0}")]
    Cancel(#[from] CancelError),
    #[error("j = {j} outside [{min}, {max}]")]
    PadIndex { j: usize, min: usize, max: usize },
    #[error("monodromy is not the identity")]
    NonTrivialMonodromy,
    #[error("total dimensions differ: {left} vs {right}")]
    DimensionsDiffer { left: usize, right: usize },
    #[error("equality condition violated: page Euler characteristics {left} and {right} must agree when the page dimension is odd")]
    ChiMismatch { left: i64, right: i64 },
    #[error("parity condition violated: page Euler characteristics {left} and {right} must agree mod 2 when the page dimension is even")]
    ParityViolated { left: i64, right: i64 },
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl From<SelectionWitness> for CalculusError {
    fn from(w: SelectionWitness) -> Self {
        CalculusError::Selection(SelectionError::Invalid(w))
    }
}

/// An abstract open book: total dimension, page and monodromy record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenBookDoc {
    n: usize,
    page: HandleDecomposition,
    monodromy: MonodromySpec,
}

impl OpenBookDoc {
    pub fn new(n: usize, page: HandleDecomposition, monodromy: MonodromySpec) -> Result<Self, CalculusError> {
        if n < 3 {
            return Err(CalculusError::TotalDimension(n));
        }
        if page.dimension() + 1 != n {
            return Err(CalculusError::Dimension { expected: n - 1, found: page.dimension() });
        }
        let violations = validate_decomposition(&page);
        if !violations.is_empty() {
            return Err(CalculusError::InvalidPage(violations));
        }
        let bad = monodromy.check_against(&page, n);
        if !bad.is_empty() {
            return Err(CalculusError::Monodromy(bad));
        }
        Ok(Self { n, page, monodromy })
    }

    /// Identity monodromy on the given page.
    pub fn trivial(n: usize, page: HandleDecomposition) -> Result<Self, CalculusError> {
        Self::new(n, page, MonodromySpec::identity())
    }

    /// The natural page with profile `p` and identity monodromy.
    pub fn natural(p: &Profile) -> Self {
        let n = p.n();
        let mut page = HandleDecomposition::disk(n - 1);
        for i in 1..=n - 2 {
            for j in 0..p.mu(i) {
                page.insert_in_order(crate::handle::Handle::new(format!("h{i}_{}", j + 1), i, true));
            }
        }
        Self { n, page, monodromy: MonodromySpec::identity() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn page(&self) -> &HandleDecomposition {
        &self.page
    }

    pub fn monodromy(&self) -> &MonodromySpec {
        &self.monodromy
    }

    pub fn profile(&self) -> Result<Profile, CalculusError> {
        Ok(profile_of(&self.page, self.n)?)
    }

    pub fn into_parts(self) -> (usize, HandleDecomposition, MonodromySpec) {
        (self.n, self.page, self.monodromy)
    }

    /// Re-validates a result before handing it out.
    pub(crate) fn rebuilt(n: usize, page: HandleDecomposition, monodromy: MonodromySpec) -> Result<Self, CalculusError> {
        Self::new(n, page, monodromy).map_err(|e| CalculusError::Internal(format!("move produced an invalid document: {e}")))
    }
}
