//! Lazy infinite sequences indexed from 1.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use crate::error::Result;
use crate::scalar::Scalar;

type Rule<T> = Arc<dyn Fn(usize) -> T + Send + Sync>;

/// Validity check run before evaluating a prefix; `guard(n)` must succeed for
/// indices `1..=n` to be well defined.
pub type Guard = Arc<dyn Fn(usize) -> Result<()> + Send + Sync>;

/// An index -> scalar rule, 1-based. Index 0 (and anything "negative") reads as zero.
///
/// Cloning is cheap; clones share the rule and any memo table.
#[derive(Clone)]
pub struct LazySequence<T> {
    rule: Rule<T>,
    support: Option<usize>,
    guards: Vec<Guard>,
}

impl<T: Scalar> fmt::Debug for LazySequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = (1..=4).map(|k| self.get(k).render()).collect();
        f.debug_struct("LazySequence")
            .field("head", &head)
            .field("support", &self.support)
            .finish()
    }
}

impl<T: Scalar> LazySequence<T> {
    pub fn from_fn(rule: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        LazySequence {
            rule: Arc::new(rule),
            support: None,
            guards: Vec::new(),
        }
    }

    /// Finitely nonzero sequence; terms beyond `values.len()` are zero.
    pub fn from_vec(values: Vec<T>) -> Self {
        let len = values.len();
        let values = Arc::new(values);
        LazySequence::from_fn(move |k| values.get(k - 1).cloned().unwrap_or_else(T::zero))
            .with_support(len)
    }

    pub fn constant(c: T) -> Self {
        if c.is_zero() {
            return Self::zeros();
        }
        LazySequence::from_fn(move |_| c.clone())
    }

    pub fn ones() -> Self {
        Self::constant(T::one())
    }

    /// θ
    pub fn zeros() -> Self {
        LazySequence::from_fn(|_| T::zero()).with_support(0)
    }

    /// e⁽ᵏ⁾
    pub fn unit(k: usize) -> Self {
        assert!(k >= 1, "unit sequences are indexed from 1");
        LazySequence::from_fn(move |j| if j == k { T::one() } else { T::zero() }).with_support(k)
    }

    /// `r^k`
    pub fn geometric(r: T) -> Self {
        LazySequence::from_fn(move |k| r.pow_int(k as i64))
    }

    /// `k^p`
    pub fn power(p: i64) -> Self {
        LazySequence::from_fn(move |k| T::from_usize(k).pow_int(p))
    }

    /// `1/k`
    pub fn harmonic() -> Self {
        Self::power(-1)
    }

    /// `(-1)^k`
    pub fn alternating() -> Self {
        LazySequence::from_fn(|k| if k % 2 == 0 { T::one() } else { -T::one() })
    }

    /// Sequence built left to right, each term seeing the already computed prefix.
    /// Terms are cached, so evaluating index `n` costs one pass over `1..=n` at most once.
    pub fn recursive(step: impl Fn(usize, &[T]) -> T + Send + Sync + 'static) -> Self {
        let cache: Arc<Mutex<Vec<T>>> = Arc::new(Mutex::new(Vec::new()));
        LazySequence::from_fn(move |n| {
            let mut done = cache.lock().expect("sequence cache poisoned");
            while done.len() < n {
                let next = step(done.len() + 1, &done);
                done.push(next);
            }
            done[n - 1].clone()
        })
    }

    /// Declares that every term beyond `bound` is zero.
    pub fn with_support(mut self, bound: usize) -> Self {
        self.support = Some(bound);
        self
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guards.push(guard);
        self
    }

    pub(crate) fn with_guards(mut self, guards: &[Guard]) -> Self {
        self.guards.extend(guards.iter().cloned());
        self
    }

    pub(crate) fn guards(&self) -> &[Guard] {
        &self.guards
    }

    pub fn support(&self) -> Option<usize> {
        self.support
    }

    /// Caches evaluated terms. Transparent: the memoized sequence is
    /// indistinguishable from the original apart from speed.
    pub fn memoized(self) -> Self {
        let cache: Arc<RwLock<HashMap<usize, T>>> = Arc::new(RwLock::new(HashMap::new()));
        let rule = self.rule.clone();
        LazySequence {
            rule: Arc::new(move |k| {
                if let Some(v) = cache.read().expect("memo poisoned").get(&k) {
                    return v.clone();
                }
                let v = rule(k);
                cache.write().expect("memo poisoned").insert(k, v.clone());
                v
            }),
            support: self.support,
            guards: self.guards,
        }
    }

    /// Term `k`. May panic if a guard (e.g. a zero weight) would have rejected
    /// the index; use [`try_get`](Self::try_get) when validity is not known.
    pub fn get(&self, k: usize) -> T {
        if k == 0 {
            return T::zero();
        }
        if let Some(s) = self.support {
            if k > s {
                return T::zero();
            }
        }
        (self.rule)(k)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        for g in &self.guards {
            g(n)?;
        }
        Ok(())
    }

    pub fn try_get(&self, k: usize) -> Result<T> {
        self.check(k)?;
        Ok(self.get(k))
    }

    /// Terms `1..=n`.
    pub fn take(&self, n: usize) -> Vec<T> {
        (1..=n).map(|k| self.get(k)).collect()
    }

    pub fn try_take(&self, n: usize) -> Result<Vec<T>> {
        self.check(n)?;
        Ok(self.take(n))
    }

    pub fn map(&self, f: impl Fn(usize, T) -> T + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        LazySequence::from_fn(move |k| f(k, inner.get(k))).with_guards(&self.guards)
    }

    pub fn abs(&self) -> Self {
        let mut out = self.map(|_, v| v.abs());
        out.support = self.support;
        out
    }

    pub fn scale(&self, c: T) -> Self {
        let mut out = self.map(move |_, v| c.clone() * v);
        out.support = self.support;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let mut out = LazySequence::from_fn(move |k| f(a.get(k), b.get(k)))
            .with_guards(&self.guards)
            .with_guards(&other.guards);
        out.support = match (self.support, other.support) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        out
    }

    /// `x - x^[m]`: the first `m` terms replaced by zero.
    pub fn zero_prefix(&self, m: usize) -> Self {
        let mut out = self.map(move |k, v| if k <= m { T::zero() } else { v });
        out.support = self.support;
        out
    }
}

/// `x_1 + ... + x_n` (left fold, in the scalar mode of `x`).
pub fn partial_sum<T: Scalar>(x: &LazySequence<T>, n: usize) -> T {
    (1..=n).fold(T::zero(), |acc, k| acc + x.get(k))
}

/// The classical spaces membership evidence is available for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceTag {
    L1,
    Linf,
    C,
    C0,
    Bs,
    Cs,
    C0s,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 7] = [
        SpaceTag::L1,
        SpaceTag::Linf,
        SpaceTag::C,
        SpaceTag::C0,
        SpaceTag::Bs,
        SpaceTag::Cs,
        SpaceTag::C0s,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::L1 => "l1",
            SpaceTag::Linf => "linf",
            SpaceTag::C => "c",
            SpaceTag::C0 => "c0",
            SpaceTag::Bs => "bs",
            SpaceTag::Cs => "cs",
            SpaceTag::C0s => "c0s",
        }
    }

    pub fn parse(s: &str) -> Option<SpaceTag> {
        SpaceTag::ALL.into_iter().find(|t| t.name() == s.to_ascii_lowercase())
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {

    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn partial_sum_examples() {
        assert_eq!(partial_sum(&LazySequence::<Exact>::ones(), 4), Exact::from_int(4));
        assert_eq!(partial_sum(&LazySequence::<Exact>::unit(2), 5), Exact::from_int(1));
        let halves = LazySequence::geometric(Exact::from_frac(1, 2));
        assert_eq!(partial_sum(&halves, 10), Exact::from_frac(1023, 1024));
    }

    #[test]
    fn index_zero_reads_zero() {
        let x = LazySequence::<Exact>::ones();
        assert_eq!(x.get(0), Exact::from_int(0));
        assert_eq!(x.get(7), Exact::from_int(1));
    }

    #[test]
    fn from_vec_has_finite_support() {
        let x = LazySequence::from_vec(vec![1.0, 2.0]);
        assert_eq!(x.support(), Some(2));
        assert_eq!(x.take(4), vec![1.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn recursive_sees_prefix() {
        // Fibonacci-like check that the prefix is passed in order
        let fib = LazySequence::<Exact>::recursive(|n, prev| {
            if n <= 2 {
                Exact::from_int(1)
            } else {
                prev[n - 2].clone() + prev[n - 3].clone()
            }
        });
        assert_eq!(fib.get(10), Exact::from_int(55));
        assert_eq!(fib.get(3), Exact::from_int(2));
    }

    #[test]
    fn zero_prefix_removes_head() {
        let x = LazySequence::<Exact>::ones().zero_prefix(3);
        assert_eq!(x.take(5).iter().filter(|v| v.is_zero()).count(), 3);
    }

    #[test]
    fn memoized_is_transparent() {
        let x = LazySequence::<Exact>::harmonic();
        let m = x.clone().memoized();
        for k in [1, 5, 5, 9, 1] {
            assert_eq!(x.get(k), m.get(k));
        }
    }

    #[test]
    fn space_tags_parse() {
        for t in SpaceTag::ALL {
            assert_eq!(SpaceTag::parse(t.name()), Some(t));
        }
        assert_eq!(SpaceTag::parse("L1"), Some(SpaceTag::L1));
        assert_eq!(SpaceTag::parse("lp"), None);
    }
}
