use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::Serialize;

use super::triangle::{Structure, TriangleOperator};
use super::weights::WeightPair;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::LazySequence;

/// Which of the two weighted-mean domains of ℓ₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DomainName {
    /// `∫bv(u,w) = (ℓ₁)_Γ`
    #[serde(rename = "int-bv")]
    IntBv,
    /// `d(bv(u,w)) = (ℓ₁)_Σ`
    #[serde(rename = "d-bv")]
    DBv,
}

impl DomainName {
    pub fn name(self) -> &'static str {
        match self {
            DomainName::IntBv => "int-bv",
            DomainName::DBv => "d-bv",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "int-bv" | "intbv" | "int_bv" => Some(DomainName::IntBv),
            "d-bv" | "dbv" | "d_bv" => Some(DomainName::DBv),
            _ => None,
        }
    }

    /// The triangle whose ℓ₁-domain this space is.
    pub fn triangle<T: Scalar>(self, wp: &WeightPair<T>) -> TriangleOperator<T> {
        match self {
            DomainName::IntBv => make_gamma(wp),
            DomainName::DBv => make_sigma(wp),
        }
    }

    /// Closed-form inverse of [`triangle`](Self::triangle).
    pub fn inverse<T: Scalar>(self, wp: &WeightPair<T>, y: &LazySequence<T>) -> LazySequence<T> {
        match self {
            DomainName::IntBv => gamma_inverse_closed_form(wp, y),
            DomainName::DBv => sigma_inverse_closed_form(wp, y),
        }
    }
}

impl std::fmt::Display for DomainName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `G(u,w)`: `g_nk = u_n w_k` for `k <= n`.
pub fn make_weighted_mean<T: Scalar>(wp: &WeightPair<T>) -> TriangleOperator<T> {
    let p = wp.clone();
    TriangleOperator::from_entries(Structure::StrictTriangle, move |n, k| {
        if k > n {
            T::zero()
        } else {
            p.u(n) * p.w(k)
        }
    })
    .with_guard(wp.guard())
}

/// Γ: `k u_n (w_k - w_{k+1})` below the diagonal, `n u_n w_n` on it.
pub fn make_gamma<T: Scalar>(wp: &WeightPair<T>) -> TriangleOperator<T> {
    let (p, q) = (wp.clone(), wp.clone());
    TriangleOperator::rank_one_lower(
        wp.u_seq().clone(),
        LazySequence::from_fn(move |k| T::from_usize(k) * (p.w(k) - p.w(k + 1))),
        LazySequence::from_fn(move |n| T::from_usize(n) * q.u(n) * q.w(n)),
    )
    .with_guard(wp.guard())
}

/// Σ: `(1/k) u_n (w_k - w_{k+1})` below the diagonal, `u_n w_n / n` on it.
pub fn make_sigma<T: Scalar>(wp: &WeightPair<T>) -> TriangleOperator<T> {
    let (p, q) = (wp.clone(), wp.clone());
    TriangleOperator::rank_one_lower(
        wp.u_seq().clone(),
        LazySequence::from_fn(move |k| (p.w(k) - p.w(k + 1)) / T::from_usize(k)),
        LazySequence::from_fn(move |n| q.u(n) * q.w(n) / T::from_usize(n)),
    )
    .with_guard(wp.guard())
}

/// Solves `T x = y` by forward substitution,
/// `x_n = (y_n - sum_{k<n} t_nk x_k) / t_nn`.
///
/// Independent of the closed-form inverses; used to check them.
pub fn invert_triangle_oracle<T: Scalar>(
    op: &TriangleOperator<T>,
    y: &LazySequence<T>,
) -> Result<LazySequence<T>> {
    if !op.is_strict() {
        return Err(Error::NotTriangle(
            "back-substitution needs zero above the diagonal and a nonzero diagonal".into(),
        ));
    }
    let (a, ys) = (op.clone(), y.clone());
    let x = LazySequence::recursive(move |n, prev: &[T]| {
        let row = a.row(n);
        let acc = prev
            .iter()
            .zip(row.iter())
            .fold(ys.get(n), |acc, (x, t)| acc - t.clone() * x.clone());
        acc / row[n - 1].clone()
    });
    let checked = Arc::new(AtomicUsize::new(0));
    let diag = op.clone();
    let singular_guard = Arc::new(move |n: usize| {
        let done = checked.load(Ordering::Acquire);
        for row in done + 1..=n {
            if diag.entry(row, row).is_zero() {
                return Err(Error::SingularTriangle { row });
            }
        }
        checked.fetch_max(n, Ordering::AcqRel);
        Ok(())
    });
    // weight guards first so a zero weight is reported as such
    Ok(x
        .with_guards(op.guards())
        .with_guards(y.guards())
        .with_guard(singular_guard))
}

/// `sum_{j<k} (1/u_j)(1/w_j - 1/w_{j+1}) y_j`, accumulated once.
fn weighted_prefix<T: Scalar>(wp: &WeightPair<T>, y: &LazySequence<T>) -> LazySequence<T> {
    let (p, ys) = (wp.clone(), y.clone());
    LazySequence::recursive(move |k, prev: &[T]| match prev.last() {
        None => T::zero(),
        Some(h) => h.clone() + p.inverse_difference(k - 1) * ys.get(k - 1),
    })
}

/// `x_k = (1/k) [ sum_{j<k} (1/u_j)(1/w_j - 1/w_{j+1}) y_j + y_k/(u_k w_k) ]`, the inverse of Γ.
pub fn gamma_inverse_closed_form<T: Scalar>(
    wp: &WeightPair<T>,
    y: &LazySequence<T>,
) -> LazySequence<T> {
    let head = weighted_prefix(wp, y);
    let (p, ys) = (wp.clone(), y.clone());
    LazySequence::from_fn(move |k| {
        (head.get(k) + ys.get(k) / (p.u(k) * p.w(k))) / T::from_usize(k)
    })
    .memoized()
    .with_guard(wp.guard())
    .with_guards(y.guards())
}

/// `x_k = k [ sum_{j<k} (1/u_j)(1/w_j - 1/w_{j+1}) y_j + y_k/(u_k w_k) ]`, the inverse of Σ.
pub fn sigma_inverse_closed_form<T: Scalar>(
    wp: &WeightPair<T>,
    y: &LazySequence<T>,
) -> LazySequence<T> {
    let head = weighted_prefix(wp, y);
    let (p, ys) = (wp.clone(), y.clone());
    LazySequence::from_fn(move |k| {
        (head.get(k) + ys.get(k) / (p.u(k) * p.w(k))) * T::from_usize(k)
    })
    .memoized()
    .with_guard(wp.guard())
    .with_guards(y.guards())
}

/// k-th basis element: the k-th column of the inverse triangle, i.e. the unique
/// `s` with `T s = e⁽ᵏ⁾`, computed by back-substitution.
pub fn basis_column<T: Scalar>(
    space: DomainName,
    wp: &WeightPair<T>,
    k: usize,
) -> Result<LazySequence<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("basis index starts at 1".into()));
    }
    invert_triangle_oracle(&space.triangle(wp), &LazySequence::unit(k))
}

/// Entry `n` of the k-th basis column in closed form:
/// `c(n) (1/u_k)(1/w_k - 1/w_{k+1})` for `k < n`, `c(n)/(u_n w_n)` for `k = n`,
/// zero for `n < k`, with `c(n) = 1/n` (Γ) or `n` (Σ).
pub fn basis_entry_closed_form<T: Scalar>(
    space: DomainName,
    wp: &WeightPair<T>,
    k: usize,
    n: usize,
) -> T {
    let c = scale::<T>(space, n);
    if n < k {
        T::zero()
    } else if n == k {
        c / (wp.u(n) * wp.w(n))
    } else {
        c * wp.inverse_difference(k)
    }
}

/// The basis entry exactly as typeset in the source formula, which has
/// `1/(u_k u_{k+1})` where `1/(u_k w_{k+1})` belongs and only covers `1 < k < n`
/// below the diagonal. Kept to report where it disagrees with the true column.
pub fn basis_entry_as_printed<T: Scalar>(
    space: DomainName,
    wp: &WeightPair<T>,
    k: usize,
    n: usize,
) -> T {
    let c = scale::<T>(space, n);
    if n == k {
        c / (wp.u(n) * wp.w(n))
    } else if 1 < k && k < n {
        let uk = wp.u(k);
        c * ((uk.clone() * wp.w(k)).recip() - (uk * wp.u(k + 1)).recip())
    } else {
        T::zero()
    }
}

fn scale<T: Scalar>(space: DomainName, n: usize) -> T {
    match space {
        DomainName::IntBv => T::from_usize(n).recip(),
        DomainName::DBv => T::from_usize(n),
    }
}

/// Agreement of the closed forms with the back-substituted basis column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisCrossCheck {
    pub k: usize,
    pub horizon: usize,
    /// First index where the corrected closed form differs from the column, if any.
    pub closed_form_mismatch: Option<usize>,
    /// First index where the typeset formula differs from the column, if any.
    pub printed_mismatch: Option<usize>,
}

pub fn basis_cross_check<T: Scalar>(
    space: DomainName,
    wp: &WeightPair<T>,
    k: usize,
    horizon: usize,
) -> Result<BasisCrossCheck> {
    let column = basis_column(space, wp, k)?.try_take(horizon.max(k + 1))?;
    wp.ensure(horizon + 1)?;
    let mismatch = |f: &dyn Fn(usize) -> T| {
        (1..=horizon).find(|&n| f(n) != column[n - 1])
    };
    Ok(BasisCrossCheck {
        k,
        horizon,
        closed_form_mismatch: mismatch(&|n| basis_entry_closed_form(space, wp, k, n)),
        printed_mismatch: mismatch(&|n| basis_entry_as_printed(space, wp, k, n)),
    })
}
