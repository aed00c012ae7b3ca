//! The matrices that reduce classes involving the two domains to classes
//! involving ℓ₁.
//!
//! `ā` and `ã` are written in the literature as a sum over k of absolute
//! values; what the reduction needs is the matrix of summands, so that is what
//! these return. Absolute values and sups belong to the condition statistics.

use std::fmt;

use serde::Serialize;

use crate::duals::pairing_row;
use crate::error::Result;
use crate::operators::{compose, make_gamma, make_sigma, DomainName, RowExtent, Structure, TriangleOperator, WeightPair};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformTag {
    None,
    /// `ā`, source `∫bv(u,w)`
    Abar,
    /// `ã`, source `d(bv(u,w))`
    Atilde,
    /// `b̄ = Γ·A`, target `∫bv(u,w)`
    Bbar,
    /// `b̃ = Σ·A`, target `d(bv(u,w))`
    Btilde,
}

impl TransformTag {
    pub fn name(self) -> &'static str {
        match self {
            TransformTag::None => "none",
            TransformTag::Abar => "abar",
            TransformTag::Atilde => "atilde",
            TransformTag::Bbar => "bbar",
            TransformTag::Btilde => "btilde",
        }
    }

    pub fn apply<T: Scalar>(self, a: &TriangleOperator<T>, wp: &WeightPair<T>) -> Result<TriangleOperator<T>> {
        match self {
            TransformTag::None => Ok(a.clone()),
            TransformTag::Abar => Ok(transform_abar(a, wp)),
            TransformTag::Atilde => Ok(transform_atilde(a, wp)),
            TransformTag::Bbar => transform_bbar(a, wp),
            TransformTag::Btilde => transform_btilde(a, wp),
        }
    }
}

impl fmt::Display for TransformTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn row_pairing<T: Scalar>(space: DomainName, a: &TriangleOperator<T>, wp: &WeightPair<T>) -> TriangleOperator<T> {
    let (a2, wp2) = (a.clone(), wp.clone());
    TriangleOperator::from_rows(Structure::RowEvaluable(RowExtent::Lower), move |n| {
        let row = a2.row_prefix(n, n);
        pairing_row(space, &wp2, |k| row[k - 1].clone(), n)
    })
    .with_guard(wp.guard())
    .with_guards(a.guards())
}

/// `b_nk = (1/k) a_nk/(u_k w_k) + (1/(u_k w_k) - 1/(u_k w_{k+1})) sum_{j=k+1..n} a_nj/j`
/// for `k <= n`. Entries of `A` right of the diagonal do not enter.
pub fn transform_abar<T: Scalar>(a: &TriangleOperator<T>, wp: &WeightPair<T>) -> TriangleOperator<T> {
    row_pairing(DomainName::IntBv, a, wp)
}

/// As [`transform_abar`] with `k` and `j` in place of `1/k` and `1/j`.
pub fn transform_atilde<T: Scalar>(a: &TriangleOperator<T>, wp: &WeightPair<T>) -> TriangleOperator<T> {
    row_pairing(DomainName::DBv, a, wp)
}

/// `Γ·A`: `b_nk = sum_{j<n} j u_n (w_j - w_{j+1}) a_jk + n u_n w_n a_nk`.
pub fn transform_bbar<T: Scalar>(a: &TriangleOperator<T>, wp: &WeightPair<T>) -> Result<TriangleOperator<T>> {
    compose(&make_gamma(wp), a, None)
}

/// `Σ·A`: as [`transform_bbar`] with `1/j` and `1/n`.
pub fn transform_btilde<T: Scalar>(a: &TriangleOperator<T>, wp: &WeightPair<T>) -> Result<TriangleOperator<T>> {
    compose(&make_sigma(wp), a, None)
}
