//! Action of the stabilization monodromies on the homology of the doubled
//! barbell page `(S^{k-1} × D^{n-k}) ♮ (S^{n-k} × D^{k-1})`.
//!
//! Bases are fixed as `(λ, μ)` in degree `k-1` and `(α, β)` in degree `n-k`.
//! A change of basis conjugates the matrices, so only "is the identity" is
//! convention independent.

use serde::Serialize;

use super::{HomologyError, IntegerMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleBasis {
    pub lower_degree: usize,
    pub lower: [&'static str; 2],
    pub upper_degree: usize,
    pub upper: [&'static str; 2],
}

impl DoubleBasis {
    pub fn for_barbell(n: usize, k: usize) -> Result<Self, HomologyError> {
        check_k(n, k)?;
        if k - 1 == n - k {
            return Err(HomologyError::Degenerate(k - 1));
        }
        Ok(Self {
            lower_degree: k - 1,
            lower: ["lambda", "mu"],
            upper_degree: n - k,
            upper: ["alpha", "beta"],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauAction {
    pub n: usize,
    pub k: usize,
    pub degree: usize,
    pub basis: [&'static str; 2],
    /// Columns are the images of the basis vectors.
    #[serde(serialize_with = "rows")]
    pub matrix: IntegerMatrix,
}

fn rows<S: serde::Serializer>(m: &IntegerMatrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&m.to_rows(), s)
}

fn check_k(n: usize, k: usize) -> Result<(), HomologyError> {
    if k < 2 || k + 1 > n {
        return Err(HomologyError::StabilizationIndex { n, k, max: n.saturating_sub(1) });
    }
    Ok(())
}

fn check_sign(sign: i64) -> Result<(), HomologyError> {
    if sign != 1 && sign != -1 {
        return Err(HomologyError::Sign(sign));
    }
    Ok(())
}

/// `H_d(τ_k)` on the double. In degree `k-1`: `λ ↦ λ`, `μ ↦ λ + sign·μ`.
/// In degree `n-k`: the identity.
pub fn tau_action_on_double(n: usize, k: usize, degree: usize, sign: i64) -> Result<TauAction, HomologyError> {
    check_sign(sign)?;
    let basis = DoubleBasis::for_barbell(n, k)?;
    let (names, matrix) = if degree == basis.lower_degree {
        (basis.lower, IntegerMatrix::from_rows(&[vec![1, 1], vec![0, sign]])?)
    } else if degree == basis.upper_degree {
        (basis.upper, IntegerMatrix::identity(2))
    } else {
        return Err(HomologyError::Degree { degree, lower: basis.lower_degree, upper: basis.upper_degree });
    };
    Ok(TauAction { n, k, degree, basis: names, matrix })
}

/// Outcome of comparing `τ_k` with `τ_{n-k+1}` on homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distinction {
    pub n: usize,
    pub k: usize,
    pub distinct: bool,
    /// First degree in which exactly one of the two actions is the identity.
    pub witness_degree: Option<usize>,
    pub tau_k: Vec<TauAction>,
    pub tau_dual: Vec<TauAction>,
}

/// Compares `τ_k` and `τ_{n-k+1}` in degrees `k-1` and `n-k`.
pub fn distinguish_monodromies(n: usize, k: usize, sign: i64) -> Result<Distinction, HomologyError> {
    distinguish_with(n, k, sign, tau_action_on_double)
}

/// [`distinguish_monodromies`] over a supplied action.
pub fn distinguish_with(
    n: usize,
    k: usize,
    sign: i64,
    tau: impl Fn(usize, usize, usize, i64) -> Result<TauAction, HomologyError>,
) -> Result<Distinction, HomologyError> {
    if n < 4 || k < 2 || 2 * k > n {
        return Err(HomologyError::DistinguishRange { n, k });
    }
    let dual_k = n - k + 1;
    let degrees = [k - 1, n - k];
    let tau_k = degrees.iter().map(|&d| tau(n, k, d, sign)).collect::<Result<Vec<_>, _>>()?;
    let tau_dual = degrees.iter().map(|&d| tau(n, dual_k, d, sign)).collect::<Result<Vec<_>, _>>()?;
    let witness_degree = tau_k
        .iter()
        .zip(&tau_dual)
        .find(|(a, b)| a.matrix.is_identity() != b.matrix.is_identity())
        .map(|(a, _)| a.degree);
    Ok(Distinction { n, k, distinct: witness_degree.is_some(), witness_degree, tau_k, tau_dual })
}
