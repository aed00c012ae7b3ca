use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::{Guard, LazySequence};

/// The weight sequences `u, w`, every term nonzero.
///
/// Nonzero-ness is checked lazily: [`ensure`](Self::ensure) verifies a prefix and
/// remembers how far it got. Every operator built from the pair carries a guard
/// that runs this check before fallible evaluation.
#[derive(Clone)]
pub struct WeightPair<T> {
    u: LazySequence<T>,
    w: LazySequence<T>,
    checked: Arc<AtomicUsize>,
}

impl<T: Scalar> std::fmt::Debug for WeightPair<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightPair").field("u", &self.u).field("w", &self.w).finish()
    }
}

impl<T: Scalar> WeightPair<T> {
    pub fn new(u: LazySequence<T>, w: LazySequence<T>) -> Self {
        WeightPair {
            u: u.memoized(),
            w: w.memoized(),
            checked: Arc::new(AtomicUsize::new(0)),
        }
    }

    pub fn ones() -> Self {
        WeightPair::new(LazySequence::ones(), LazySequence::ones())
    }

    pub fn u_seq(&self) -> &LazySequence<T> {
        &self.u
    }

    pub fn w_seq(&self) -> &LazySequence<T> {
        &self.w
    }

    pub fn u(&self, k: usize) -> T {
        self.u.get(k)
    }

    pub fn w(&self, k: usize) -> T {
        self.w.get(k)
    }

    /// `(1/u_k)(1/w_k - 1/w_{k+1})`, the coefficient shared by every inverse formula.
    pub fn inverse_difference(&self, k: usize) -> T {
        self.u(k).recip() * (self.w(k).recip() - self.w(k + 1).recip())
    }

    /// Checks `u_1..u_n` and `w_1..w_{n+1}` are nonzero.
    pub fn ensure(&self, n: usize) -> Result<()> {
        let done = self.checked.load(Ordering::Acquire);
        if n <= done {
            return Ok(());
        }
        for k in done + 1..=n {
            if self.u(k).is_zero() {
                return Err(Error::InvalidWeight { which: "u", index: k });
            }
            if k == 1 && self.w(1).is_zero() {
                return Err(Error::InvalidWeight { which: "w", index: 1 });
            }
            if self.w(k + 1).is_zero() {
                return Err(Error::InvalidWeight {
                    which: "w",
                    index: k + 1,
                });
            }
        }
        self.checked.fetch_max(n, Ordering::AcqRel);
        Ok(())
    }

    pub fn guard(&self) -> Guard {
        let wp = self.clone();
        Arc::new(move |n| wp.ensure(n))
    }
}

#[cfg(test)]
mod tests {

    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn zero_weight_is_named() {
        let u = LazySequence::<Exact>::from_fn(|k| Exact::from_int(if k == 3 { 0 } else { 1 }));
        let wp = WeightPair::new(u, LazySequence::ones());
        assert!(wp.ensure(2).is_ok());
        assert_eq!(
            wp.ensure(5),
            Err(Error::InvalidWeight { which: "u", index: 3 })
        );
        let w = LazySequence::<Exact>::from_fn(|k| Exact::from_int(k as i64 - 4));
        let wp = WeightPair::new(LazySequence::ones(), w);
        assert_eq!(
            wp.ensure(10),
            Err(Error::InvalidWeight { which: "w", index: 4 })
        );
    }

    #[test]
    fn inverse_difference_vanishes_for_constant_w() {
        let wp = WeightPair::<Exact>::ones();
        assert!(wp.inverse_difference(7).is_zero());
    }
}
