use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::handle::{HandleDecomposition, HandleId};
use crate::profile::{alternating_sum, format_counts};

/// A single legal move on a page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Move {
    /// Replace each selected `k`-handle by an `(n-k)`-handle.
    Exchange { ids: Vec<HandleId>, indices: Vec<usize> },
    StabilizeK { k: usize },
    StabilizeMiddle,
    /// Add a canceling `(j, j+1)` pair.
    Pad { j: usize },
    /// Remove a canceling pair; `index` is the upper index.
    Cancel { upper: HandleId, lower: HandleId, index: usize },
    /// Exchange every handle of index `2..=n-2`.
    NormalForm,
}

fn parity(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Move {
    /// Count transform on page counts over `0..=n-1`; `None` if it does not apply.
    pub fn apply(&self, n: usize, counts: &[u64]) -> Option<Vec<u64>> {
        let mut c = counts.to_vec();
        let bump = |c: &mut Vec<u64>, i: usize| -> Option<()> {
            *c.get_mut(i)? += 1;
            Some(())
        };
        let drop = |c: &mut Vec<u64>, i: usize| -> Option<()> {
            let slot = c.get_mut(i)?;
            *slot = slot.checked_sub(1)?;
            Some(())
        };
        match self {
            Move::Exchange { indices, .. } => {
                for &k in indices {
                    if k < 2 || k >= n {
                        return None;
                    }
                    drop(&mut c, k)?;
                    bump(&mut c, n - k)?;
                }
            }
            Move::StabilizeK { k } => {
                if *k < 2 || *k >= n {
                    return None;
                }
                bump(&mut c, k - 1)?;
                bump(&mut c, n - k)?;
            }
            Move::StabilizeMiddle => {
                if n.is_multiple_of(2) {
                    return None;
                }
                bump(&mut c, (n - 1) / 2)?;
            }
            Move::Pad { j } => {
                if *j == 0 {
                    return None;
                }
                bump(&mut c, *j)?;
                bump(&mut c, j + 1)?;
            }
            Move::Cancel { index, .. } => {
                if *index < 2 {
                    return None;
                }
                drop(&mut c, *index)?;
                drop(&mut c, index - 1)?;
            }
            Move::NormalForm => {
                if c.len() != n {
                    return None;
                }
                for i in 2..n.saturating_sub(1) {
                    c[i] = counts[n - i];
                }
            }
        }
        Some(c)
    }

    /// Euler characteristic change of the page, when it is determined by the move alone.
    pub fn chi_delta(&self, n: usize) -> Option<i64> {
        match self {
            Move::Exchange { indices, .. } => {
                Some(indices.iter().map(|&k| parity(n - k) - parity(k)).sum())
            }
            Move::StabilizeK { k } => Some(parity(k - 1) + parity(n - k)),
            Move::StabilizeMiddle => Some(parity((n - 1) / 2)),
            Move::Pad { .. } | Move::Cancel { .. } => Some(0),
            Move::NormalForm => None,
        }
    }

    fn justification(&self) -> &'static str {
        match self {
            Move::Exchange { .. } => "exchange moves are handle slides; the open book is unchanged up to diffeomorphism",
            Move::StabilizeK { .. } => "k-stabilization adds the barbell summands with an extended monodromy",
            Move::StabilizeMiddle => "middle-dimensional stabilization adds one S^l x D^l summand",
            Move::Pad { .. } => "a canceling pair added in a boundary collar leaves page and monodromy unchanged",
            Move::Cancel { .. } => "a canceling pair with incidence +-1 and no other attachments is removed",
            Move::NormalForm => "exchange of every handle of index 2..n-2 yields a boundary sum of sphere bundles",
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Exchange { ids, .. } => {
                let names: Vec<&str> = ids.iter().map(HandleId::as_str).collect();
                write!(f, "exchange({})", names.join(","))
            }
            Move::StabilizeK { k } => write!(f, "stabilize_k({k})"),
            Move::StabilizeMiddle => f.write_str("stabilize_middle"),
            Move::Pad { j } => write!(f, "pad({j})"),
            Move::Cancel { upper, lower, .. } => write!(f, "cancel({upper},{lower})"),
            Move::NormalForm => f.write_str("normal_form"),
        }
    }
}

/// One logged move with the page counts (indices `0..=n-1`) around it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRecord {
    #[serde(rename = "move")]
    pub action: Move,
    pub counts_before: Vec<u64>,
    pub counts_after: Vec<u64>,
    pub chi_before: i64,
    pub chi_after: i64,
    pub justification: String,
}

impl MoveRecord {
    pub fn from_counts(action: Move, before: Vec<u64>, after: Vec<u64>) -> Self {
        let justification = action.justification().to_owned();
        Self {
            chi_before: alternating_sum(&before),
            chi_after: alternating_sum(&after),
            counts_before: before,
            counts_after: after,
            action,
            justification,
        }
    }

    pub(crate) fn between(action: Move, before: &HandleDecomposition, after: &HandleDecomposition) -> Self {
        Self::from_counts(action, before.counts(), after.counts())
    }
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {}, chi {} -> {}",
            self.action,
            format_counts(&self.counts_before),
            format_counts(&self.counts_after),
            self.chi_before,
            self.chi_after
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveLog(Vec<MoveRecord>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("record {step}: counts before {found} do not continue from {expected}")]
    Chain { step: usize, expected: String, found: String },
    #[error("record {step}: move {action} does not apply to {counts}")]
    NotApplicable { step: usize, action: String, counts: String },
    #[error("record {step}: move {action} should give {expected}, log says {found}")]
    Transform { step: usize, action: String, expected: String, found: String },
    #[error("record {step}: chi {before} -> {after} does not match the declared change {declared}")]
    Chi { step: usize, before: i64, after: i64, declared: i64 },
    #[error("record {step}: recorded chi values disagree with the recorded counts")]
    ChiRecord { step: usize },
}

impl MoveLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[MoveRecord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, record: MoveRecord) {
        self.0.push(record);
    }

    pub fn extend(&mut self, other: MoveLog) {
        self.0.extend(other.0);
    }

    pub fn single(record: MoveRecord) -> Self {
        Self(vec![record])
    }

    pub(crate) fn records_mut(&mut self) -> &mut Vec<MoveRecord> {
        &mut self.0
    }

    /// Replays every record from `start` and returns the final counts.
    /// Checks chaining, each move's count transform and its declared χ change.
    pub fn replay(&self, n: usize, start: &[u64]) -> Result<Vec<u64>, ReplayError> {
        let mut current = start.to_vec();
        for (step, r) in self.0.iter().enumerate() {
            if r.counts_before != current {
                return Err(ReplayError::Chain {
                    step,
                    expected: format_counts(&current),
                    found: format_counts(&r.counts_before),
                });
            }
            let next = r.action.apply(n, &current).ok_or_else(|| ReplayError::NotApplicable {
                step,
                action: r.action.to_string(),
                counts: format_counts(&current),
            })?;
            if next != r.counts_after {
                return Err(ReplayError::Transform {
                    step,
                    action: r.action.to_string(),
                    expected: format_counts(&next),
                    found: format_counts(&r.counts_after),
                });
            }
            if r.chi_before != alternating_sum(&r.counts_before) || r.chi_after != alternating_sum(&r.counts_after) {
                return Err(ReplayError::ChiRecord { step });
            }
            let declared = r
                .action
                .chi_delta(n)
                .unwrap_or_else(|| alternating_sum(&next) - alternating_sum(&current));
            if r.chi_after - r.chi_before != declared {
                return Err(ReplayError::Chi { step, before: r.chi_before, after: r.chi_after, declared });
            }
            current = next;
        }
        Ok(current)
    }
}

impl<'a> IntoIterator for &'a MoveLog {
    type Item = &'a MoveRecord;
    type IntoIter = std::slice::Iter<'a, MoveRecord>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms() {
        assert_eq!(Move::StabilizeK { k: 3 }.apply(5, &[1, 0, 0, 0, 0]), Some(vec![1, 0, 2, 0, 0]));
        assert_eq!(Move::StabilizeMiddle.apply(5, &[1, 0, 0, 0, 0]), Some(vec![1, 0, 1, 0, 0]));
        assert_eq!(Move::StabilizeMiddle.apply(4, &[1, 0, 0, 0]), None);
        assert_eq!(Move::Pad { j: 2 }.apply(5, &[1, 1, 0, 0, 0]), Some(vec![1, 1, 1, 1, 0]));
        assert_eq!(
            Move::Exchange { ids: vec!["a".into()], indices: vec![3] }.apply(5, &[1, 0, 0, 1, 0]),
            Some(vec![1, 0, 1, 0, 0])
        );
        assert_eq!(Move::NormalForm.apply(6, &[1, 1, 2, 0, 0, 0]), Some(vec![1, 1, 0, 0, 2, 0]));
        assert_eq!(Move::Exchange { ids: vec![], indices: vec![3] }.apply(5, &[1, 0, 0, 0, 0]), None);
    }

    #[test]
    fn chi_deltas() {
        assert_eq!(Move::StabilizeK { k: 3 }.chi_delta(5), Some(2));
        assert_eq!(Move::StabilizeK { k: 2 }.chi_delta(5), Some(-2));
        assert_eq!(Move::StabilizeK { k: 2 }.chi_delta(4), Some(0));
        assert_eq!(Move::StabilizeMiddle.chi_delta(3), Some(-1));
        assert_eq!(Move::StabilizeMiddle.chi_delta(5), Some(1));
    }

    #[test]
    fn replay_detects_broken_chains() {
        let mut log = MoveLog::new();
        log.push(MoveRecord::from_counts(Move::StabilizeK { k: 3 }, vec![1, 0, 0, 0, 0], vec![1, 0, 2, 0, 0]));
        assert_eq!(log.replay(5, &[1, 0, 0, 0, 0]).unwrap(), vec![1, 0, 2, 0, 0]);
        assert!(matches!(log.replay(5, &[1, 1, 0, 0, 0]), Err(ReplayError::Chain { .. })));

        let mut bad = log.clone();
        bad.records_mut()[0].chi_after = 1;
        assert!(matches!(bad.replay(5, &[1, 0, 0, 0, 0]), Err(ReplayError::ChiRecord { .. })));

        let mut bad = log;
        bad.records_mut()[0].counts_after = vec![1, 1, 1, 0, 0];
        assert!(matches!(bad.replay(5, &[1, 0, 0, 0, 0]), Err(ReplayError::Transform { .. })));
    }
}
