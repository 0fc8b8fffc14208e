//! Handle-count vectors and the counting laws stated on them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::handle::{validate_decomposition, HandleDecomposition, HandleId, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("total dimension n = {0} is below 3")]
    DimensionTooSmall(usize),
    #[error("profile for n = {n} needs {expected} counts, got {found}")]
    Length { n: usize, expected: usize, found: usize },
    #[error("page has dimension {found}, expected n - 1 = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("page boundary is empty")]
    ClosedPage,
    #[error("page carries a top-dimensional handle {0} although its boundary is non-empty")]
    TopHandle(HandleId),
    #[error("page is not a valid decomposition: {}", .0.first().map(ToString::to_string).unwrap_or_default())]
    Invalid(Vec<Violation>),
    #[error("count vector of length {found} does not fit dimension {dimension}")]
    CountsShape { dimension: usize, found: usize },
}

/// Page profile `(μ_1, …, μ_{n-2})`: handle counts of a page with one
/// 0-handle and no top handles, inside an `n`-dimensional open book.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    n: usize,
    counts: Vec<u64>,
}

impl Profile {
    pub fn new(n: usize, counts: Vec<u64>) -> Result<Self, ProfileError> {
        if n < 3 {
            return Err(ProfileError::DimensionTooSmall(n));
        }
        if counts.len() != n - 2 {
            return Err(ProfileError::Length { n, expected: n - 2, found: counts.len() });
        }
        Ok(Self { n, counts })
    }

    /// The disk page `D^{n-1}`.
    pub fn disk(n: usize) -> Result<Self, ProfileError> {
        Self::new(n, vec![0; n.saturating_sub(2)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `μ_i`, one-based; zero outside `1..=n-2`.
    pub fn mu(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        self.counts.get(i - 1).copied().unwrap_or(0)
    }

    /// Page counts over indices `0..=n-1`: one 0-handle, the μ's, no top handle.
    pub fn page_counts(&self) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.n);
        v.push(1);
        v.extend_from_slice(&self.counts);
        v.push(0);
        v
    }

    /// Reads a profile back from page counts over `0..=n-1`.
    pub fn from_page_counts(n: usize, counts: &[u64]) -> Result<Self, ProfileError> {
        if counts.len() != n || counts.first() != Some(&1) || counts.last() != Some(&0) {
            return Err(ProfileError::CountsShape { dimension: n.saturating_sub(1), found: counts.len() });
        }
        Self::new(n, counts[1..n - 1].to_vec())
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.counts)
    }
}

/// Handle counts of a closed `n`-manifold over indices `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosedProfile {
    n: usize,
    counts: Vec<u64>,
}

impl ClosedProfile {
    pub fn new(n: usize, counts: Vec<u64>) -> Result<Self, ProfileError> {
        if counts.len() != n + 1 {
            return Err(ProfileError::CountsShape { dimension: n, found: counts.len() });
        }
        Ok(Self { n, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.counts)
    }
}

impl fmt::Display for ClosedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.counts)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

pub fn format_counts(xs: &[u64]) -> String {
    struct T<'a>(&'a [u64]);
    impl fmt::Display for T<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_tuple(f, self.0)
        }
    }
    T(xs).to_string()
}

/// `Σ (-1)^i c_i` over a count vector indexed from 0.
pub fn alternating_sum(counts: &[u64]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Euler characteristic of a page: `1 + Σ_{i=1}^{n-2} (-1)^i μ_i`.
pub fn euler_characteristic(p: &Profile) -> i64 {
    1 + p
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| if (i + 1) % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum::<i64>()
}

/// Index reversal `k ↦ m - k` of a count vector over `0..=m` or `1..=m-1`.
pub fn dual_profile(counts: &[u64], m: usize) -> Result<Vec<u64>, ProfileError> {
    if counts.len() != m + 1 && counts.len() + 1 != m {
        return Err(ProfileError::CountsShape { dimension: m, found: counts.len() });
    }
    Ok(counts.iter().rev().copied().collect())
}

/// Counts of the double: the decomposition followed by its dual.
pub fn double_profile(counts: &[u64], m: usize) -> Result<ClosedProfile, ProfileError> {
    if counts.len() != m + 1 {
        return Err(ProfileError::CountsShape { dimension: m, found: counts.len() });
    }
    let doubled = (0..=m).map(|k| counts[k] + counts[m - k]).collect();
    ClosedProfile::new(m, doubled)
}

/// Profile of a page decomposition inside an `n`-dimensional open book.
pub fn profile_of(h: &HandleDecomposition, n: usize) -> Result<Profile, ProfileError> {
    if n < 3 {
        return Err(ProfileError::DimensionTooSmall(n));
    }
    if h.dimension() + 1 != n {
        return Err(ProfileError::DimensionMismatch { expected: n - 1, found: h.dimension() });
    }
    if !h.boundary_nonempty() {
        return Err(ProfileError::ClosedPage);
    }
    if let Some(top) = h.handles_of_index(n - 1).next() {
        return Err(ProfileError::TopHandle(top.id.clone()));
    }
    let violations = validate_decomposition(h);
    if !violations.is_empty() {
        return Err(ProfileError::Invalid(violations));
    }
    let counts = h.counts();
    Profile::new(n, counts[1..n - 1].to_vec())
}
