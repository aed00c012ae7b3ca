//! Classical summability matrices, indexed from 1.

use std::sync::Arc;

use super::triangle::{RowExtent, Structure, TriangleOperator};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::LazySequence;

#[derive(Clone)]
pub enum ClassicalKind<T> {
    Identity,
    /// `C(n-1,k-1) (1-r)^{n-k} r^{k-1}` for `k <= n`.
    Euler(T),
    /// `t_k / T_n` for `k <= n`, `T_n = t_1 + ... + t_n`.
    Riesz(LazySequence<T>),
    /// Riesz with `t = 1`.
    Cesaro,
    /// `C(k-1,n-1) (1-r)^n r^{k-n}` for `k >= n`: infinite rows.
    Taylor(T),
    /// `1` on the diagonal, `-1` just below it.
    Difference,
}

impl<T: Scalar> std::fmt::Debug for ClassicalKind<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

impl<T: Scalar> ClassicalKind<T> {
    pub fn label(&self) -> String {
        match self {
            ClassicalKind::Identity => "identity".into(),
            ClassicalKind::Euler(r) => format!("euler:{}", r.render()),
            ClassicalKind::Riesz(_) => "riesz".into(),
            ClassicalKind::Cesaro => "cesaro".into(),
            ClassicalKind::Taylor(r) => format!("taylor:{}", r.render()),
            ClassicalKind::Difference => "difference".into(),
        }
    }
}

fn unit_interval<T: Scalar>(r: &T, what: &str) -> Result<()> {
    if *r > T::zero() && *r < T::one() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!(
            "{what} needs 0 < r < 1, got {}",
            r.render()
        )))
    }
}

pub fn classical_matrix<T: Scalar>(kind: &ClassicalKind<T>) -> Result<TriangleOperator<T>> {
    Ok(match kind {
        ClassicalKind::Identity => TriangleOperator::identity(),
        ClassicalKind::Euler(r) => {
            unit_interval(r, "euler")?;
            let (r, s) = (r.clone(), T::one() - r.clone());
            TriangleOperator::from_entries(Structure::StrictTriangle, move |n, k| {
                if k > n {
                    return T::zero();
                }
                T::binomial_term((n - 1) as u64, (k - 1) as u64, &s, (n - k) as u64, &r, (k - 1) as u64)
            })
        }
        ClassicalKind::Riesz(t) => riesz(t.clone()),
        ClassicalKind::Cesaro => riesz(LazySequence::ones()),
        ClassicalKind::Taylor(r) => {
            unit_interval(r, "taylor")?;
            let (r, s) = (r.clone(), T::one() - r.clone());
            TriangleOperator::from_entries(Structure::RowEvaluable(RowExtent::Infinite), move |n, k| {
                if k < n {
                    return T::zero();
                }
                T::binomial_term((k - 1) as u64, (n - 1) as u64, &s, n as u64, &r, (k - n) as u64)
            })
            // negative binomial probabilities: every row sums to 1
            .with_row_abs_sum(|_| 1.0)
        }
        ClassicalKind::Difference => TriangleOperator::from_entries(Structure::StrictTriangle, |n, k| {
            if k == n {
                T::one()
            } else if k + 1 == n {
                -T::one()
            } else {
                T::zero()
            }
        }),
    })
}

fn riesz<T: Scalar>(t: LazySequence<T>) -> TriangleOperator<T> {
    let t = t.memoized();
    let totals = {
        let t = t.clone();
        LazySequence::recursive(move |n, prev: &[T]| {
            prev.last().cloned().unwrap_or_else(T::zero) + t.get(n)
        })
    };
    let guard_t = t.clone();
    TriangleOperator::from_rows(Structure::StrictTriangle, move |n| {
        let total = totals.get(n);
        (1..=n).map(|k| t.get(k) / total.clone()).collect()
    })
    .with_guard(Arc::new(move |n| {
        match (1..=n).find(|&k| guard_t.get(k) <= T::zero()) {
            Some(k) => Err(Error::ParameterOutOfRange(format!(
                "riesz weights must be positive, t_{k} = {}",
                guard_t.get(k).render()
            ))),
            None => Ok(()),
        }
    }))
}
