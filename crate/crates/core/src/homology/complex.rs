use std::collections::HashMap;

use super::{HomologyError, IntegerMatrix};
use crate::handle::{HandleDecomposition, HandleId};

/// Free chain groups with boundary maps `∂_k : C_k → C_{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k`, of shape `ranks[k-1] x ranks[k]`.
    boundaries: Vec<IntegerMatrix>,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntegerMatrix>) -> Result<Self, HomologyError> {
        let expected_maps = ranks.len().saturating_sub(1);
        if boundaries.len() != expected_maps {
            return Err(HomologyError::BoundaryShape {
                degree: boundaries.len(),
                expected: (expected_maps, 0),
                found: (boundaries.len(), 0),
            });
        }
        for (i, b) in boundaries.iter().enumerate() {
            let k = i + 1;
            let expected = (ranks[k - 1], ranks[k]);
            if (b.rows(), b.cols()) != expected {
                return Err(HomologyError::BoundaryShape { degree: k, expected, found: (b.rows(), b.cols()) });
            }
        }
        Ok(Self { ranks, boundaries })
    }

    /// The complex with the given ranks and every boundary map zero.
    pub fn zero_boundaries(ranks: Vec<usize>) -> Self {
        let boundaries = ranks.windows(2).map(|w| IntegerMatrix::zeros(w[0], w[1])).collect();
        Self { ranks, boundaries }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundaries(&self) -> &[IntegerMatrix] {
        &self.boundaries
    }

    pub fn check_boundary_square(&self) -> Result<(), HomologyError> {
        for (i, pair) in self.boundaries.windows(2).enumerate() {
            if !pair[0].mul(&pair[1])?.is_zero() {
                return Err(HomologyError::BoundarySquare(i + 2));
            }
        }
        Ok(())
    }
}

/// Cellular chain complex of a decomposition: one generator per handle, in
/// attachment order within each degree.
pub fn chain_complex(h: &HandleDecomposition) -> ChainComplex {
    let m = h.dimension();
    let mut slot: HashMap<&HandleId, (usize, usize)> = HashMap::new();
    let mut ranks = vec![0usize; m + 1];
    for handle in h.handles() {
        if handle.index <= m {
            slot.insert(&handle.id, (handle.index, ranks[handle.index]));
            ranks[handle.index] += 1;
        }
    }
    let mut boundaries: Vec<IntegerMatrix> =
        ranks.windows(2).map(|w| IntegerMatrix::zeros(w[0], w[1])).collect();
    for ((a, b), &c) in h.incidence() {
        if let (Some(&(ka, ja)), Some(&(kb, jb))) = (slot.get(a), slot.get(b)) {
            if ka == kb + 1 {
                boundaries[kb][(jb, ja)] = c;
            }
        }
    }
    ChainComplex { ranks, boundaries }
}

/// Complex of the double: the decomposition followed by its dual, whose
/// boundary maps are the transposes. The dual handles attach along the
/// boundary by the identity, so there are no cross terms.
pub fn double_complex(h: &HandleDecomposition) -> ChainComplex {
    let base = chain_complex(h);
    let m = h.dimension();
    let r = base.ranks();
    let ranks: Vec<usize> = (0..=m).map(|k| r[k] + r[m - k]).collect();
    let mut boundaries = Vec::with_capacity(m);
    for k in 1..=m {
        let mut b = IntegerMatrix::zeros(ranks[k - 1], ranks[k]);
        // page block: ∂_k on the first r[k] columns
        let page = &base.boundaries()[k - 1];
        for i in 0..page.rows() {
            for j in 0..page.cols() {
                b[(i, j)] = page[(i, j)];
            }
        }
        // dual block: duals of degree k come from page degree m-k; their
        // boundary is the transpose of ∂_{m-k+1}
        let src = &base.boundaries()[m - k];
        let (row0, col0) = (r[k - 1], r[k]);
        for i in 0..src.cols() {
            for j in 0..src.rows() {
                b[(row0 + i, col0 + j)] = src[(j, i)];
            }
        }
        boundaries.push(b);
    }
    ChainComplex { ranks, boundaries }
}

/// Complex of `Ob(M, id)`: the double of the half open book on the page.
pub fn open_book_complex(page: &HandleDecomposition) -> ChainComplex {
    let mut hob = page.clone();
    hob.set_dimension(page.dimension() + 1);
    double_complex(&hob)
}
