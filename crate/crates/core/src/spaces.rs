//! The domains `∫bv(u,w) = (ℓ₁)_Γ` and `d(bv(u,w)) = (ℓ₁)_Σ`.

use crate::error::{Error, Result};
use crate::evidence::{space_evidence, ConditionVerdict, TruncationSchedule};
use crate::operators::{apply_triangle, DomainName, StructuralKind, TriangleOperator, WeightPair};
use crate::scalar::Scalar;
use crate::seq::{LazySequence, SpaceTag};

/// A domain of ℓ₁ under Γ or Σ built from a weight pair.
#[derive(Clone)]
pub struct DomainSpace<T> {
    name: DomainName,
    weights: WeightPair<T>,
    triangle: TriangleOperator<T>,
}

impl<T: Scalar> std::fmt::Debug for DomainSpace<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DomainSpace").field("name", &self.name).finish_non_exhaustive()
    }
}

impl<T: Scalar> DomainSpace<T> {
    pub fn new(name: DomainName, weights: WeightPair<T>) -> Self {
        let triangle = name.triangle(&weights);
        debug_assert_eq!(triangle.kind(), StructuralKind::StrictTriangle);
        DomainSpace { name, weights, triangle }
    }

    pub fn int_bv(weights: WeightPair<T>) -> Self {
        Self::new(DomainName::IntBv, weights)
    }

    pub fn d_bv(weights: WeightPair<T>) -> Self {
        Self::new(DomainName::DBv, weights)
    }

    pub fn name(&self) -> DomainName {
        self.name
    }

    /// The space whose domain this is; always ℓ₁.
    pub fn base(&self) -> SpaceTag {
        SpaceTag::L1
    }

    pub fn weights(&self) -> &WeightPair<T> {
        &self.weights
    }

    pub fn triangle(&self) -> &TriangleOperator<T> {
        &self.triangle
    }

    /// `Tx` for the defining triangle T.
    pub fn transform(&self, x: &LazySequence<T>) -> LazySequence<T> {
        apply_triangle(&self.triangle, x).expect("weighted-mean triangles have finite rows")
    }
}

/// `sum_{m <= n} |(Tx)_m|`, the n-th partial norm.
pub fn domain_norm<T: Scalar>(space: &DomainSpace<T>, x: &LazySequence<T>, n: usize) -> Result<T> {
    let tx = space.transform(x).try_take(n)?;
    Ok(tx.into_iter().fold(T::zero(), |acc, v| acc + v.abs()))
}

/// Evidence that `Tx` lies in ℓ₁.
pub fn membership_evidence<T: Scalar>(
    space: &DomainSpace<T>,
    x: &LazySequence<T>,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    space_evidence(&space.transform(x), SpaceTag::L1, sched)
}

/// The preimage of `y` under T, via the closed-form inverse. For `y` in ℓ₁ this
/// is the norm-preserving isomorphism back onto the domain.
pub fn embed_from_l1<T: Scalar>(space: &DomainSpace<T>, y: &LazySequence<T>) -> LazySequence<T> {
    space.name.inverse(&space.weights, y)
}

/// Partial norm at `n_eval` of `x` with its first `m` coordinates set to zero.
/// Only offered for `d(bv(u,w))`, the space with AK.
pub fn ak_tail_norm<T: Scalar>(
    space: &DomainSpace<T>,
    x: &LazySequence<T>,
    m: usize,
    n_eval: usize,
) -> Result<T> {
    if space.name != DomainName::DBv {
        return Err(Error::UnsupportedSpace(format!(
            "AK tail is offered for d-bv only, not {}",
            space.name
        )));
    }
    if n_eval < m {
        return Err(Error::InvalidArgument(format!(
            "evaluation size {n_eval} is below the cut {m}"
        )));
    }
    domain_norm(space, &x.zero_prefix(m), n_eval)
}
