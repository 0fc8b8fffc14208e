//! Exact integral homology of handle decompositions.
//!
//! The cellular chain complex of a decomposition has one generator per
//! handle and boundary maps given by the incidence numbers. Everything is
//! computed over the integers with overflow-checked `i64` arithmetic; an
//! overflow is reported as [`HomologyError::Overflow`], never wrapped.

mod complex;
mod matrix;
mod snf;
mod tau;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::profile::Profile;

pub use complex::{chain_complex, double_complex, open_book_complex, ChainComplex};
pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, SmithForm};
pub use tau::{distinguish_monodromies, distinguish_with, tau_action_on_double, DoubleBasis, Distinction, TauAction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("rows of unequal length")]
    Ragged,
    #[error("cannot multiply {left:?} by {right:?}")]
    Shape { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("boundary map in degree {degree} has shape {found:?}, expected {expected:?}")]
    BoundaryShape { degree: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("boundary of boundary is non-zero at degree {0}")]
    BoundarySquare(usize),
    #[error("page carries incidence data; use the chain complex instead of the closed form")]
    NonNaturalPage,
    #[error("homology of open books with non-identity monodromy is not computed")]
    NonTrivialMonodromy,
    #[error("k = {k} outside [2, {max}] for n = {n}")]
    StabilizationIndex { n: usize, k: usize, max: usize },
    #[error("degree {degree} is neither k-1 = {lower} nor n-k = {upper}")]
    Degree { degree: usize, lower: usize, upper: usize },
    #[error("k - 1 = n - k = {0}: the two degrees coincide")]
    Degenerate(usize),
    #[error("distinguishing needs n >= 4 and 2 <= k <= n/2, got n = {n}, k = {k}")]
    DistinguishRange { n: usize, k: usize },
    #[error("sign must be +1 or -1, got {0}")]
    Sign(i64),
}

/// `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_r` with `d_1 | d_2 | …` and every `d_i ≥ 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub rank: u64,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(rank: u64) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_owned()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Homology groups indexed by degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GradedAbelianGroup {
    pub groups: Vec<AbelianGroup>,
}

impl GradedAbelianGroup {
    pub fn free_ranks(ranks: impl IntoIterator<Item = u64>) -> Self {
        Self { groups: ranks.into_iter().map(AbelianGroup::free).collect() }
    }

    pub fn degree(&self, d: usize) -> AbelianGroup {
        self.groups.get(d).cloned().unwrap_or_default()
    }

    pub fn ranks(&self) -> Vec<u64> {
        self.groups.iter().map(|g| g.rank).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }

    /// Alternating sum of free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(i, g)| if i % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }

    fn divisibility_chain_holds(&self) -> bool {
        self.groups.iter().all(|g| {
            g.torsion.iter().all(|&d| d >= 2) && g.torsion.windows(2).all(|w| w[1] % w[0] == 0)
        })
    }
}

impl fmt::Display for GradedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "H_{i} = {g}")?;
        }
        Ok(())
    }
}

/// `H_k = ker ∂_k / im ∂_{k+1}` via Smith normal forms of the boundary maps.
pub fn homology_of_complex(c: &ChainComplex) -> Result<GradedAbelianGroup, HomologyError> {
    c.check_boundary_square()?;
    let forms = c
        .boundaries()
        .iter()
        .map(smith_normal_form)
        .collect::<Result<Vec<_>, _>>()?;
    // forms[k - 1] belongs to ∂_k
    let rank_of = |k: usize| if k == 0 { 0 } else { forms.get(k - 1).map_or(0, SmithForm::rank) };
    let groups = (0..c.ranks().len())
        .map(|k| {
            let free = c.ranks()[k] - rank_of(k) - rank_of(k + 1);
            let torsion = forms
                .get(k)
                .map(|f| {
                    f.divisors()
                        .into_iter()
                        .filter(|&d| d > 1)
                        .map(|d| d as u64)
                        .collect()
                })
                .unwrap_or_default();
            AbelianGroup { rank: free as u64, torsion }
        })
        .collect();
    let out = GradedAbelianGroup { groups };
    debug_assert!(out.divisibility_chain_holds());
    Ok(out)
}

/// Homology of the natural page `♮ S^i × D^{n-1-i}`: free of rank `μ_i` in degree `i`.
pub fn page_homology(p: &Profile) -> GradedAbelianGroup {
    let n = p.n();
    GradedAbelianGroup::free_ranks((0..n).map(|i| match i {
        0 => 1,
        i if i <= n - 2 => p.mu(i),
        _ => 0,
    }))
}

/// Homology of the double of a natural page (dimension `m = n - 1`).
pub fn double_homology_natural(p: &Profile) -> GradedAbelianGroup {
    let m = p.n() - 1;
    GradedAbelianGroup::free_ranks((0..=m).map(|j| {
        if j == 0 || j == m {
            1
        } else {
            p.mu(j) + p.mu(m - j)
        }
    }))
}

/// Homology of `Ob(M, id)` for a natural page: `#_i #_{μ_i} S^i × S^{n-i}`.
pub fn open_book_homology_trivial(p: &Profile) -> GradedAbelianGroup {
    let n = p.n();
    GradedAbelianGroup::free_ranks((0..=n).map(|j| {
        if j == 0 || j == n {
            1
        } else {
            p.mu(j) + p.mu(n - j)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, c: &[u64]) -> Profile {
        Profile::new(n, c.to_vec()).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(page_homology(&p(3, &[1])).ranks(), vec![1, 1, 0]);
        assert_eq!(page_homology(&p(5, &[0, 1, 0])).ranks(), vec![1, 0, 1, 0, 0]);
        assert_eq!(page_homology(&p(6, &[2, 0, 1, 0])).ranks(), vec![1, 2, 0, 1, 0, 0]);

        assert_eq!(double_homology_natural(&p(3, &[1])).ranks(), vec![1, 2, 1]);
        assert_eq!(double_homology_natural(&p(5, &[1, 0, 1])).ranks(), vec![1, 2, 0, 2, 1]);
        assert_eq!(double_homology_natural(&p(5, &[0, 0, 0])).ranks(), vec![1, 0, 0, 0, 1]);

        assert_eq!(open_book_homology_trivial(&p(3, &[1])).ranks(), vec![1, 1, 1, 1]);
        assert_eq!(open_book_homology_trivial(&p(5, &[0, 2, 0])).ranks(), vec![1, 0, 2, 2, 0, 1]);
        assert_eq!(open_book_homology_trivial(&p(4, &[0, 0])).ranks(), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn display() {
        let g = GradedAbelianGroup {
            groups: vec![AbelianGroup::free(1), AbelianGroup { rank: 2, torsion: vec![2, 4] }, AbelianGroup::default()],
        };
        assert_eq!(g.to_string(), "H_0 = Z, H_1 = Z^2 + Z/2 + Z/4, H_2 = 0");
    }
}
