//! Monodromy records attached to a page.
//!
//! The engine never manipulates diffeomorphisms. A monodromy is one of: the
//! identity, an annotated map whose triviality is read per handle from the
//! page flags, or the built-in stabilization monodromy `τ_k` of the barbell
//! page. An optional homology action gives integer matrices per degree in the
//! basis of that degree's handles.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::handle::HandleDecomposition;
use crate::homology::IntegerMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromyKind {
    Identity,
    Annotated,
    Tau { k: usize, sign: Sign },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromySpec {
    pub kind: MonodromyKind,
    /// Degree → square matrix over the handles of that degree, in order.
    pub homology_action: BTreeMap<usize, IntegerMatrix>,
    /// Display name used in attaching-sphere descriptions.
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyViolation {
    #[error("identity monodromy but handle {0} is flagged non-trivial")]
    IdentityWithNontrivialHandle(String),
    #[error("homology action in degree {degree} is {rows}x{cols}, expected square of size {handles}")]
    ActionShape { degree: usize, rows: usize, cols: usize, handles: usize },
    #[error("homology action in degree {degree} has determinant {det}, expected +1 or -1")]
    ActionNotUnimodular { degree: usize, det: i64 },
    #[error("homology action in degree {degree} could not be evaluated exactly")]
    ActionOverflow { degree: usize },
    #[error("tau_{k} needs 2 <= k <= n - 1 = {max}")]
    TauIndex { k: usize, max: usize },
}

impl MonodromySpec {
    pub fn identity() -> Self {
        Self { kind: MonodromyKind::Identity, homology_action: BTreeMap::new(), label: None }
    }

    pub fn annotated(label: Option<String>) -> Self {
        Self { kind: MonodromyKind::Annotated, homology_action: BTreeMap::new(), label }
    }

    pub fn tau(k: usize, sign: Sign) -> Self {
        Self { kind: MonodromyKind::Tau { k, sign }, homology_action: BTreeMap::new(), label: None }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, MonodromyKind::Identity)
    }

    /// Name used for the monodromy image of a cocore.
    pub fn name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match self.kind {
            MonodromyKind::Identity => "id".to_owned(),
            MonodromyKind::Annotated => "phi".to_owned(),
            MonodromyKind::Tau { k, .. } => format!("tau_{k}"),
        }
    }

    /// The same map, now read from per-handle flags.
    pub(crate) fn into_annotated(self) -> Self {
        let label = self.label.clone().or_else(|| match self.kind {
            MonodromyKind::Identity | MonodromyKind::Annotated => None,
            MonodromyKind::Tau { .. } => Some(self.name()),
        });
        Self { kind: MonodromyKind::Annotated, homology_action: self.homology_action, label }
    }

    /// New handles in `degree` on which the map acts as the identity.
    pub(crate) fn extend_identity(&mut self, degree: usize, extra: usize) {
        if let Some(m) = self.homology_action.get_mut(&degree) {
            *m = m.extend_identity(extra);
        }
    }

    pub(crate) fn forget_degree(&mut self, degree: usize) {
        self.homology_action.remove(&degree);
    }

    /// Consistency of the record with the page it acts on.
    pub fn check_against(&self, page: &HandleDecomposition, n: usize) -> Vec<MonodromyViolation> {
        let mut out = Vec::new();
        match self.kind {
            MonodromyKind::Identity => {
                for h in page.handles().iter().filter(|h| !h.monodromy_trivial) {
                    out.push(MonodromyViolation::IdentityWithNontrivialHandle(h.id.to_string()));
                }
            }
            MonodromyKind::Tau { k, .. } => {
                if k < 2 || k + 1 > n {
                    out.push(MonodromyViolation::TauIndex { k, max: n.saturating_sub(1) });
                }
            }
            MonodromyKind::Annotated => {}
        }
        for (&degree, m) in &self.homology_action {
            let handles = page.handles_of_index(degree).count();
            if m.rows() != m.cols() || m.rows() != handles {
                out.push(MonodromyViolation::ActionShape { degree, rows: m.rows(), cols: m.cols(), handles });
                continue;
            }
            match m.determinant() {
                Ok(1) | Ok(-1) => {}
                Ok(det) => out.push(MonodromyViolation::ActionNotUnimodular { degree, det }),
                Err(_) => out.push(MonodromyViolation::ActionOverflow { degree }),
            }
        }
        out
    }
}

impl fmt::Display for MonodromySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MonodromyKind::Identity => f.write_str("identity"),
            MonodromyKind::Annotated => write!(f, "annotated ({})", self.name()),
            MonodromyKind::Tau { k, sign } => write!(f, "tau(k={k}, sign={})", sign.value()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handle::Handle;

    #[test]
    fn identity_requires_trivial_flags() {
        let page = HandleDecomposition::disk(2).with_handle(Handle::new("h1", 1, false));
        assert_eq!(
            MonodromySpec::identity().check_against(&page, 3),
            vec![MonodromyViolation::IdentityWithNontrivialHandle("h1".into())]
        );
        assert!(MonodromySpec::annotated(None).check_against(&page, 3).is_empty());
    }

    #[test]
    fn actions_must_be_unimodular_and_sized() {
        let page = HandleDecomposition::disk(3)
            .with_handle(Handle::new("a", 1, true))
            .with_handle(Handle::new("b", 1, true));
        let mut m = MonodromySpec::annotated(None);
        m.homology_action.insert(1, IntegerMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap());
        assert!(m.check_against(&page, 4).is_empty());
        m.homology_action.insert(1, IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap());
        assert_eq!(m.check_against(&page, 4), vec![MonodromyViolation::ActionNotUnimodular { degree: 1, det: 2 }]);
        m.homology_action.insert(1, IntegerMatrix::identity(3));
        assert!(matches!(m.check_against(&page, 4)[0], MonodromyViolation::ActionShape { .. }));
    }

    #[test]
    fn names() {
        assert_eq!(MonodromySpec::tau(3, Sign::Plus).name(), "tau_3");
        assert_eq!(MonodromySpec::tau(3, Sign::Plus).into_annotated().name(), "tau_3");
        assert_eq!(MonodromySpec::annotated(Some("tau".into())).name(), "tau");
        assert_eq!(MonodromySpec::identity().name(), "id");
    }
}
