//! Combinatorial handle decompositions.
//!
//! A decomposition records its handles in attachment order together with two
//! relations between them: the *dependency* relation (the attaching sphere of
//! `a` cannot be isotoped off the belt sphere of `b`) and the integer
//! *incidence* numbers (algebraic intersection of the attaching sphere of `a`
//! with the belt sphere of `b`, for `index(a) = index(b) + 1`). Dependencies
//! are declared by the document author and are never inferred.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque handle identifier. Ordering of handles is the list order, never the id order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HandleId(String);

impl HandleId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for HandleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for HandleId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for HandleId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handle {
    pub id: HandleId,
    pub index: usize,
    /// The monodromy restricted to this handle is isotopic to the identity.
    pub monodromy_trivial: bool,
    /// Free-text name of the boundary component a summand was attached along.
    /// Carried through every move and ignored by all counting laws.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
}

impl Handle {
    pub fn new(id: impl Into<String>, index: usize, monodromy_trivial: bool) -> Self {
        Self {
            id: HandleId::new(id),
            index,
            monodromy_trivial,
            boundary: None,
        }
    }

    pub fn with_boundary(mut self, label: impl Into<String>) -> Self {
        self.boundary = Some(label.into());
        self
    }
}

/// One violated decomposition invariant, naming the handles involved.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("dimension {dimension} is below 2")]
    DimensionTooSmall { dimension: usize },
    #[error("duplicate id {id} at handles[{first}] and handles[{second}]")]
    DuplicateId { id: HandleId, first: usize, second: usize },
    #[error("handle {id} has index {index} outside 0..={dimension}")]
    IndexOutOfRange { id: HandleId, index: usize, dimension: usize },
    #[error("order not non-decreasing: {earlier} (index {earlier_index}) precedes {later} (index {later_index})")]
    OrderNotNonDecreasing {
        earlier: HandleId,
        earlier_index: usize,
        later: HandleId,
        later_index: usize,
    },
    #[error("unknown handle {id} referenced by {context}")]
    UnknownHandle { id: HandleId, context: &'static str },
    #[error("dependency ({from}, {to}) requires {from} to be attached after {to}")]
    DependencyOrder { from: HandleId, to: HandleId },
    #[error("incidence outside dependencies: ({from}, {to})")]
    IncidenceOutsideDependencies { from: HandleId, to: HandleId },
    #[error("incidence ({from}, {to}) joins handles whose indices do not differ by one")]
    IncidenceIndexMismatch { from: HandleId, to: HandleId },
    #[error("incidence ({from}, {to}) is zero; omit the entry instead")]
    ZeroIncidence { from: HandleId, to: HandleId },
    #[error("expected exactly one 0-handle, found {count}")]
    ZeroHandleCount { count: usize, ids: Vec<HandleId> },
    #[error("top-dimensional handle {id} on a decomposition with non-empty boundary")]
    TopHandleWithBoundary { id: HandleId },
    #[error("boundary of boundary is non-zero from {from} (index {degree}) to {to}: coefficient {value}")]
    BoundarySquareNonzero {
        degree: usize,
        from: HandleId,
        to: HandleId,
        value: i128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HandleError {
    #[error("unknown handle {0}")]
    UnknownHandle(HandleId),
}

/// An ordered handle decomposition of a compact `dimension`-manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandleDecomposition {
    dimension: usize,
    handles: Vec<Handle>,
    dependencies: BTreeSet<(HandleId, HandleId)>,
    incidence: BTreeMap<(HandleId, HandleId), i64>,
    boundary_nonempty: bool,
}

impl HandleDecomposition {
    /// An empty decomposition; add handles with the `with_*` builders.
    pub fn new(dimension: usize, boundary_nonempty: bool) -> Self {
        Self {
            dimension,
            handles: Vec::new(),
            dependencies: BTreeSet::new(),
            incidence: BTreeMap::new(),
            boundary_nonempty,
        }
    }

    /// The disk `D^dimension` as a single 0-handle named `h0`.
    pub fn disk(dimension: usize) -> Self {
        Self::new(dimension, true).with_handle(Handle::new("h0", 0, true))
    }

    pub fn with_handle(mut self, handle: Handle) -> Self {
        self.handles.push(handle);
        self
    }

    pub fn with_dependency(mut self, from: impl Into<HandleId>, to: impl Into<HandleId>) -> Self {
        self.dependencies.insert((from.into(), to.into()));
        self
    }

    pub fn with_incidence(
        mut self,
        from: impl Into<HandleId>,
        to: impl Into<HandleId>,
        coefficient: i64,
    ) -> Self {
        self.incidence.insert((from.into(), to.into()), coefficient);
        self
    }

    pub(crate) fn from_parts(
        dimension: usize,
        handles: Vec<Handle>,
        dependencies: BTreeSet<(HandleId, HandleId)>,
        incidence: BTreeMap<(HandleId, HandleId), i64>,
        boundary_nonempty: bool,
    ) -> Self {
        Self {
            dimension,
            handles,
            dependencies,
            incidence,
            boundary_nonempty,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn handles(&self) -> &[Handle] {
        &self.handles
    }

    pub fn dependencies(&self) -> &BTreeSet<(HandleId, HandleId)> {
        &self.dependencies
    }

    pub fn incidence(&self) -> &BTreeMap<(HandleId, HandleId), i64> {
        &self.incidence
    }

    pub fn boundary_nonempty(&self) -> bool {
        self.boundary_nonempty
    }

    pub fn handle(&self, id: &HandleId) -> Option<&Handle> {
        self.handles.iter().find(|h| &h.id == id)
    }

    pub fn position(&self, id: &HandleId) -> Option<usize> {
        self.handles.iter().position(|h| &h.id == id)
    }

    pub fn require(&self, id: &HandleId) -> Result<&Handle, HandleError> {
        self.handle(id).ok_or_else(|| HandleError::UnknownHandle(id.clone()))
    }

    /// Handles of the given index, in attachment order.
    pub fn handles_of_index(&self, index: usize) -> impl Iterator<Item = &Handle> {
        self.handles.iter().filter(move |h| h.index == index)
    }

    /// Number of handles of each index `0..=dimension`; out-of-range indices are ignored.
    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.dimension + 1];
        for h in &self.handles {
            if let Some(c) = counts.get_mut(h.index) {
                *c += 1;
            }
        }
        counts
    }

    /// No dependencies, no incidence and every handle monodromy-trivial.
    pub fn is_natural(&self) -> bool {
        self.dependencies.is_empty()
            && self.incidence.is_empty()
            && self.handles.iter().all(|h| h.monodromy_trivial)
    }

    pub(crate) fn contains_id(&self, id: &str) -> bool {
        self.handles.iter().any(|h| h.id.as_str() == id)
    }

    /// `base`, or `base#2`, `base#3`, ... whichever is not taken yet.
    pub(crate) fn fresh_id(&self, base: &str) -> HandleId {
        if !self.contains_id(base) {
            return HandleId::new(base);
        }
        (2..)
            .map(|i| format!("{base}#{i}"))
            .find(|candidate| !self.contains_id(candidate))
            .map(HandleId::new)
            .expect("unbounded suffix search")
    }

    /// Inserts after the last handle whose index does not exceed the new one.
    pub(crate) fn insert_in_order(&mut self, handle: Handle) {
        let at = self
            .handles
            .iter()
            .rposition(|h| h.index <= handle.index)
            .map_or(0, |p| p + 1);
        self.handles.insert(at, handle);
    }

    pub(crate) fn add_dependency(&mut self, from: HandleId, to: HandleId) {
        self.dependencies.insert((from, to));
    }

    pub(crate) fn add_incidence(&mut self, from: HandleId, to: HandleId, coefficient: i64) {
        self.incidence.insert((from, to), coefficient);
    }

    /// Drops the handles and every relation that mentions them.
    pub(crate) fn remove_handles(&mut self, ids: &BTreeSet<HandleId>) {
        self.handles.retain(|h| !ids.contains(&h.id));
        self.dependencies
            .retain(|(a, b)| !ids.contains(a) && !ids.contains(b));
        self.incidence
            .retain(|(a, b), _| !ids.contains(a) && !ids.contains(b));
    }

    pub(crate) fn retain_relations(&mut self, keep: impl Fn(&Handle, &Handle) -> bool) {
        let index: HashMap<&HandleId, &Handle> = self.handles.iter().map(|h| (&h.id, h)).collect();
        let keep_pair = |a: &HandleId, b: &HandleId| match (index.get(a), index.get(b)) {
            (Some(ha), Some(hb)) => keep(ha, hb),
            _ => false,
        };
        let deps = self
            .dependencies
            .iter()
            .filter(|(a, b)| keep_pair(a, b))
            .cloned()
            .collect();
        let inc = self
            .incidence
            .iter()
            .filter(|((a, b), _)| keep_pair(a, b))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        self.dependencies = deps;
        self.incidence = inc;
    }

    pub(crate) fn set_dimension(&mut self, dimension: usize) {
        self.dimension = dimension;
    }

    pub(crate) fn set_flags(&mut self, trivial: impl Fn(&Handle) -> bool) {
        for h in &mut self.handles {
            h.monodromy_trivial = trivial(h);
        }
    }
}

/// Returns every violated invariant; an empty list means the decomposition is valid.
pub fn validate_decomposition(h: &HandleDecomposition) -> Vec<Violation> {
    validate_with(h, false)
}

/// Like [`validate_decomposition`] but tolerates top-dimensional handles on a
/// decomposition with boundary. Selections range up to the top index, so the
/// exchange machinery accepts such transient pages.
pub(crate) fn validate_allowing_top(h: &HandleDecomposition) -> Vec<Violation> {
    validate_with(h, true)
}

fn validate_with(h: &HandleDecomposition, allow_top: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    if h.dimension < 2 {
        out.push(Violation::DimensionTooSmall { dimension: h.dimension });
    }

    let mut seen: HashMap<&HandleId, usize> = HashMap::new();
    for (pos, handle) in h.handles.iter().enumerate() {
        if let Some(&first) = seen.get(&handle.id) {
            out.push(Violation::DuplicateId {
                id: handle.id.clone(),
                first,
                second: pos,
            });
        } else {
            seen.insert(&handle.id, pos);
        }
        if handle.index > h.dimension {
            out.push(Violation::IndexOutOfRange {
                id: handle.id.clone(),
                index: handle.index,
                dimension: h.dimension,
            });
        }
    }

    for pair in h.handles.windows(2) {
        if pair[0].index > pair[1].index {
            out.push(Violation::OrderNotNonDecreasing {
                earlier: pair[0].id.clone(),
                earlier_index: pair[0].index,
                later: pair[1].id.clone(),
                later_index: pair[1].index,
            });
        }
    }

    for (a, b) in &h.dependencies {
        let (pa, pb) = (seen.get(a), seen.get(b));
        if pa.is_none() {
            out.push(Violation::UnknownHandle { id: a.clone(), context: "dependencies" });
        }
        if pb.is_none() {
            out.push(Violation::UnknownHandle { id: b.clone(), context: "dependencies" });
        }
        if let (Some(pa), Some(pb)) = (pa, pb) {
            if pa <= pb {
                out.push(Violation::DependencyOrder { from: a.clone(), to: b.clone() });
            }
        }
    }

    let index_of = |id: &HandleId| seen.get(id).map(|&p| h.handles[p].index);
    for ((a, b), &c) in &h.incidence {
        let (ia, ib) = (index_of(a), index_of(b));
        if ia.is_none() {
            out.push(Violation::UnknownHandle { id: a.clone(), context: "incidence" });
        }
        if ib.is_none() {
            out.push(Violation::UnknownHandle { id: b.clone(), context: "incidence" });
        }
        if let (Some(ia), Some(ib)) = (ia, ib) {
            if ia != ib + 1 {
                out.push(Violation::IncidenceIndexMismatch { from: a.clone(), to: b.clone() });
            }
        }
        if c == 0 {
            out.push(Violation::ZeroIncidence { from: a.clone(), to: b.clone() });
        } else if !h.dependencies.contains(&(a.clone(), b.clone())) {
            out.push(Violation::IncidenceOutsideDependencies { from: a.clone(), to: b.clone() });
        }
    }

    let zero: Vec<HandleId> = h.handles_of_index(0).map(|x| x.id.clone()).collect();
    if zero.len() != 1 {
        out.push(Violation::ZeroHandleCount { count: zero.len(), ids: zero });
    }
    if h.boundary_nonempty && !allow_top {
        for top in h.handles_of_index(h.dimension) {
            out.push(Violation::TopHandleWithBoundary { id: top.id.clone() });
        }
    }

    out.extend(boundary_square_violations(h));
    out
}

/// Entries of `∂_{k-1} ∘ ∂_k` that are non-zero.
fn boundary_square_violations(h: &HandleDecomposition) -> Vec<Violation> {
    let mut outgoing: BTreeMap<&HandleId, Vec<(&HandleId, i64)>> = BTreeMap::new();
    for ((a, b), &c) in &h.incidence {
        outgoing.entry(a).or_default().push((b, c));
    }
    let mut out = Vec::new();
    for handle in &h.handles {
        let Some(first) = outgoing.get(&handle.id) else { continue };
        let mut composite: BTreeMap<&HandleId, i128> = BTreeMap::new();
        for &(mid, c1) in first {
            for &(to, c2) in outgoing.get(mid).map(Vec::as_slice).unwrap_or(&[]) {
                *composite.entry(to).or_default() += i128::from(c1) * i128::from(c2);
            }
        }
        for (to, value) in composite {
            if value != 0 {
                out.push(Violation::BoundarySquareNonzero {
                    degree: handle.index,
                    from: handle.id.clone(),
                    to: to.clone(),
                    value,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canceling_disk() -> HandleDecomposition {
        HandleDecomposition::disk(4)
            .with_handle(Handle::new("a", 1, true))
            .with_handle(Handle::new("b", 2, true))
            .with_dependency("b", "a")
            .with_incidence("b", "a", 1)
    }

    #[test]
    fn minimal_decomposition_is_valid() {
        assert!(validate_decomposition(&HandleDecomposition::disk(2)).is_empty());
        assert!(validate_decomposition(&canceling_disk()).is_empty());
    }

    #[test]
    fn order_violation_is_reported() {
        let h = HandleDecomposition::disk(3)
            .with_handle(Handle::new("two", 2, true))
            .with_handle(Handle::new("one", 1, true));
        let v = validate_decomposition(&h);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("order not non-decreasing"));
    }

    #[test]
    fn incidence_needs_a_dependency() {
        let h = HandleDecomposition::disk(3)
            .with_handle(Handle::new("h1", 1, true))
            .with_handle(Handle::new("h2", 2, true))
            .with_incidence("h2", "h1", 1);
        let v = validate_decomposition(&h);
        assert_eq!(
            v,
            vec![Violation::IncidenceOutsideDependencies { from: "h2".into(), to: "h1".into() }]
        );
        assert!(v[0].to_string().contains("incidence outside dependencies"));
    }

    #[test]
    fn geometric_dependency_without_incidence_is_fine() {
        let h = HandleDecomposition::disk(3)
            .with_handle(Handle::new("h1", 1, true))
            .with_handle(Handle::new("h2", 2, true))
            .with_dependency("h2", "h1");
        assert!(validate_decomposition(&h).is_empty());
    }

    #[test]
    fn each_invariant_can_be_triggered() {
        // dependency pointing backwards
        let h = canceling_disk().with_dependency("a", "b");
        assert!(validate_decomposition(&h)
            .iter()
            .any(|v| matches!(v, Violation::DependencyOrder { .. })));

        // two 0-handles
        let h = canceling_disk().with_handle(Handle::new("z", 0, true));
        assert!(validate_decomposition(&h)
            .iter()
            .any(|v| matches!(v, Violation::ZeroHandleCount { count: 2, .. })));

        // top handle with boundary
        let h = canceling_disk().with_handle(Handle::new("top", 4, true));
        assert!(validate_decomposition(&h)
            .iter()
            .any(|v| matches!(v, Violation::TopHandleWithBoundary { .. })));
        assert!(validate_allowing_top(&h).is_empty());

        // ∂∂ ≠ 0
        let h = canceling_disk()
            .with_handle(Handle::new("c", 3, true))
            .with_dependency("c", "b")
            .with_incidence("c", "b", 1);
        assert!(validate_decomposition(&h)
            .iter()
            .any(|v| matches!(v, Violation::BoundarySquareNonzero { value: 1, .. })));
    }

    #[test]
    fn duplicates_and_unknowns() {
        let h = canceling_disk()
            .with_handle(Handle::new("b", 2, true))
            .with_dependency("ghost", "a");
        let v = validate_decomposition(&h);
        assert!(v.contains(&Violation::DuplicateId { id: "b".into(), first: 2, second: 3 }));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::UnknownHandle { id, .. } if id.as_str() == "ghost")));
    }

    #[test]
    fn insertion_keeps_index_order() {
        let mut h = canceling_disk();
        h.insert_in_order(Handle::new("x", 1, true));
        let ids: Vec<_> = h.handles().iter().map(|h| h.id.as_str()).collect();
        assert_eq!(ids, ["h0", "a", "x", "b"]);
        assert_eq!(h.fresh_id("x").as_str(), "x#2");
    }
}
