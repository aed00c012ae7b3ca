use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::{Guard, LazySequence};

type EntryRule<T> = Arc<dyn Fn(usize, usize) -> T + Send + Sync>;
type RowRule<T> = Arc<dyn Fn(usize) -> Vec<T> + Send + Sync>;

/// Where the nonzero part of each row ends.
#[derive(Clone)]
pub enum RowExtent {
    /// Zero above the diagonal (diagonal may vanish).
    Lower,
    /// Row `n` is zero beyond column `f(n)`.
    Finite(Arc<dyn Fn(usize) -> usize + Send + Sync>),
    /// Infinitely many nonzero entries per row.
    Infinite,
}

#[derive(Clone)]
pub enum Structure {
    /// Zero above the diagonal with nonzero diagonal: invertible by back-substitution.
    StrictTriangle,
    RowEvaluable(RowExtent),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StructuralKind {
    StrictTriangle,
    RowEvaluable,
}

#[derive(Clone)]
enum Rule<T> {
    Entry(EntryRule<T>),
    Rows(RowRule<T>),
}

/// `t_nk = left_n right_k` for `k < n`, `diag_n` for `k = n`.
#[derive(Clone)]
struct RankOneLower<T> {
    left: LazySequence<T>,
    right: LazySequence<T>,
    diag: LazySequence<T>,
}

/// An infinite matrix evaluated lazily, row by row.
///
/// Finite rows are memoized; the cache is shared between clones and safe for
/// concurrent reads.
#[derive(Clone)]
pub struct TriangleOperator<T> {
    rule: Rule<T>,
    structure: Structure,
    row_limit: Option<usize>,
    row_abs_sum: Option<Arc<dyn Fn(usize) -> f64 + Send + Sync>>,
    factors: Option<RankOneLower<T>>,
    guards: Vec<Guard>,
    rows: Arc<RwLock<HashMap<usize, Arc<Vec<T>>>>>,
}

impl<T: Scalar> fmt::Debug for TriangleOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TriangleOperator")
            .field("kind", &self.kind())
            .field("row_limit", &self.row_limit)
            .finish()
    }
}

impl<T: Scalar> TriangleOperator<T> {
    pub fn from_entries(
        structure: Structure,
        f: impl Fn(usize, usize) -> T + Send + Sync + 'static,
    ) -> Self {
        Self::with_rule(structure, Rule::Entry(Arc::new(f)))
    }

    /// Row rule: `f(n)` returns row `n` up to its extent.
    pub fn from_rows(structure: Structure, f: impl Fn(usize) -> Vec<T> + Send + Sync + 'static) -> Self {
        assert!(
            !matches!(structure, Structure::RowEvaluable(RowExtent::Infinite)),
            "infinite rows need an entry rule"
        );
        Self::with_rule(structure, Rule::Rows(Arc::new(f)))
    }

    /// Leading block given explicitly; rows beyond the block are zero and
    /// evaluation past them is refused.
    pub fn from_dense(block: Vec<Vec<T>>) -> Self {
        let height = block.len();
        let lens: Arc<Vec<usize>> = Arc::new(block.iter().map(Vec::len).collect());
        let block = Arc::new(block);
        let ext = {
            let lens = lens.clone();
            move |n: usize| lens.get(n - 1).copied().unwrap_or(0)
        };
        Self::from_rows(Structure::RowEvaluable(RowExtent::Finite(Arc::new(ext))), move |n| {
            block.get(n - 1).cloned().unwrap_or_default()
        })
        .with_row_limit(height)
    }

    /// Lower triangle `left_n right_k` below the diagonal and `diag_n` on it.
    /// Applying it costs O(n) through a running prefix sum.
    pub fn rank_one_lower(left: LazySequence<T>, right: LazySequence<T>, diag: LazySequence<T>) -> Self {
        let factors = RankOneLower { left: left.clone(), right: right.clone(), diag: diag.clone() };
        let mut op = Self::from_rows(Structure::StrictTriangle, move |n| {
            let ln = left.get(n);
            let mut row: Vec<T> = (1..n).map(|k| ln.clone() * right.get(k)).collect();
            row.push(diag.get(n));
            row
        });
        op.factors = Some(factors);
        op
    }

    pub fn identity() -> Self {
        Self::from_entries(Structure::StrictTriangle, |n, k| {
            if n == k {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    fn with_rule(structure: Structure, rule: Rule<T>) -> Self {
        TriangleOperator {
            rule,
            structure,
            row_limit: None,
            row_abs_sum: None,
            factors: None,
            guards: Vec::new(),
            rows: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    pub fn with_guard(mut self, g: Guard) -> Self {
        self.guards.push(g);
        self
    }

    pub(crate) fn with_guards(mut self, gs: &[Guard]) -> Self {
        self.guards.extend(gs.iter().cloned());
        self
    }

    pub(crate) fn guards(&self) -> &[Guard] {
        &self.guards
    }

    /// Rows past `limit` are not valid (e.g. a truncated infinite sum).
    pub fn with_row_limit(mut self, limit: usize) -> Self {
        self.row_limit = Some(self.row_limit.map_or(limit, |l| l.min(limit)));
        self
    }

    /// Total `sum_k |a_nk|` of each row, for certifying truncated infinite rows.
    pub fn with_row_abs_sum(mut self, f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        self.row_abs_sum = Some(Arc::new(f));
        self
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn kind(&self) -> StructuralKind {
        match self.structure {
            Structure::StrictTriangle => StructuralKind::StrictTriangle,
            Structure::RowEvaluable(_) => StructuralKind::RowEvaluable,
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self.structure, Structure::StrictTriangle)
    }

    pub fn row_limit(&self) -> Option<usize> {
        self.row_limit
    }

    /// Last possibly nonzero column of row `n`; `None` for infinite rows.
    pub fn row_extent(&self, n: usize) -> Option<usize> {
        match &self.structure {
            Structure::StrictTriangle | Structure::RowEvaluable(RowExtent::Lower) => Some(n),
            Structure::RowEvaluable(RowExtent::Finite(f)) => Some(f(n)),
            Structure::RowEvaluable(RowExtent::Infinite) => None,
        }
    }

    pub fn is_lower(&self) -> bool {
        matches!(
            self.structure,
            Structure::StrictTriangle | Structure::RowEvaluable(RowExtent::Lower)
        )
    }

    /// Runs weight guards and the row limit for rows/columns up to `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        self.check_block(n, n)
    }

    /// The row limit applies to `rows`; weight guards to every index touched.
    pub fn check_block(&self, rows: usize, cols: usize) -> Result<()> {
        if let Some(limit) = self.row_limit {
            if rows > limit {
                return Err(Error::RowBoundExceeded { needed: rows, limit });
            }
        }
        for g in &self.guards {
            g(rows.max(cols))?;
        }
        Ok(())
    }

    /// Row `n` up to its extent (memoized). Panics on infinite rows.
    pub fn row(&self, n: usize) -> Arc<Vec<T>> {
        if let Some(r) = self.rows.read().expect("row cache poisoned").get(&n) {
            return r.clone();
        }
        let ext = self
            .row_extent(n)
            .expect("row() on an operator with infinite rows");
        let row = match &self.rule {
            Rule::Rows(f) => {
                let mut r = f(n);
                r.resize(ext, T::zero());
                r
            }
            Rule::Entry(f) => (1..=ext).map(|k| f(n, k)).collect(),
        };
        let row = Arc::new(row);
        self.rows
            .write()
            .expect("row cache poisoned")
            .insert(n, row.clone());
        row
    }

    pub fn try_row(&self, n: usize) -> Result<Arc<Vec<T>>> {
        let ext = self
            .row_extent(n)
            .ok_or_else(|| Error::UnsupportedRow(format!("row {n} has infinitely many entries")))?;
        self.check_block(n, ext)?;
        Ok(self.row(n))
    }

    pub fn entry(&self, n: usize, k: usize) -> T {
        if n == 0 || k == 0 {
            return T::zero();
        }
        match self.row_extent(n) {
            Some(ext) if k > ext => T::zero(),
            Some(_) => self.row(n)[k - 1].clone(),
            None => match &self.rule {
                Rule::Entry(f) => f(n, k),
                Rule::Rows(_) => unreachable!("row rules are finite"),
            },
        }
    }

    pub fn try_entry(&self, n: usize, k: usize) -> Result<T> {
        self.check_block(n, k)?;
        Ok(self.entry(n, k))
    }

    /// Entries `1..=cols` of row `n`, zero padded.
    pub fn row_prefix(&self, n: usize, cols: usize) -> Vec<T> {
        match self.row_extent(n) {
            Some(_) => {
                let row = self.row(n);
                (0..cols)
                    .map(|i| row.get(i).cloned().unwrap_or_else(T::zero))
                    .collect()
            }
            None => (1..=cols).map(|k| self.entry(n, k)).collect(),
        }
    }

    /// The leading `rows x cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Result<Vec<Vec<T>>> {
        self.check_block(rows, cols)?;
        Ok((1..=rows).map(|n| self.row_prefix(n, cols)).collect())
    }

    /// `sum_{k > bound} |a_nk|`, when the row's total absolute mass is known.
    pub fn row_tail_mass(&self, n: usize, bound: usize) -> Option<f64> {
        let total = self.row_abs_sum.as_ref()?(n);
        let head: f64 = (1..=bound).map(|k| self.entry(n, k).abs().to_f64()).sum();
        Some((total - head).max(0.0))
    }

    /// Row `n` as a sequence.
    pub fn row_sequence(&self, n: usize) -> LazySequence<T> {
        let op = self.clone();
        let seq = LazySequence::from_fn(move |k| op.entry(n, k)).with_guards(&self.guards);
        match self.row_extent(n) {
            Some(ext) => seq.with_support(ext),
            None => seq,
        }
    }
}

/// `y_n = sum_k a_nk x_k`. Rows must be finite.
pub fn apply_triangle<T: Scalar>(
    op: &TriangleOperator<T>,
    x: &LazySequence<T>,
) -> Result<LazySequence<T>> {
    if op.row_extent(1).is_none() {
        return Err(Error::UnsupportedRow(
            "infinite rows need an explicit truncation bound".into(),
        ));
    }
    let (a, xs) = (op.clone(), x.clone());
    let limit = op.row_limit;
    let y = match &op.factors {
        Some(RankOneLower { left, right, diag }) => {
            // prefix_n = sum_{k<=n} right_k x_k
            let (r, xp) = (right.clone(), xs.clone());
            let prefix = LazySequence::recursive(move |k, prev: &[T]| {
                prev.last().cloned().unwrap_or_else(T::zero) + r.get(k) * xp.get(k)
            });
            let (l, d) = (left.clone(), diag.clone());
            LazySequence::from_fn(move |n| {
                let below = if n > 1 { l.get(n) * prefix.get(n - 1) } else { T::zero() };
                below + d.get(n) * xs.get(n)
            })
        }
        None => LazySequence::from_fn(move |n| {
            let row = a.row(n);
            row.iter()
                .enumerate()
                .fold(T::zero(), |acc, (i, v)| acc + v.clone() * xs.get(i + 1))
        }),
    }
    .memoized()
    .with_guards(op.guards())
    .with_guards(x.guards());
    Ok(match limit {
        Some(l) => y.with_guard(Arc::new(move |n| {
            if n > l {
                Err(Error::RowBoundExceeded { needed: n, limit: l })
            } else {
                Ok(())
            }
        })),
        None => y,
    })
}

/// Result of applying an operator with rows cut at a fixed column.
pub struct TruncatedApply<T> {
    pub values: LazySequence<T>,
    pub bound: usize,
    op: TriangleOperator<T>,
}

impl<T: Scalar> TruncatedApply<T> {
    /// `sum_{k>bound} |a_nk|`: multiply by `sup |x_k|` to bound the truncation error of row `n`.
    pub fn tail_mass(&self, n: usize) -> Option<f64> {
        self.op.row_tail_mass(n, self.bound)
    }
}

/// `y_n = sum_{k <= bound} a_nk x_k`, for operators with infinite rows.
pub fn apply_row_truncated<T: Scalar>(
    op: &TriangleOperator<T>,
    x: &LazySequence<T>,
    bound: usize,
) -> Result<TruncatedApply<T>> {
    if bound == 0 {
        return Err(Error::InvalidArgument("row bound must be positive".into()));
    }
    let (a, xs) = (op.clone(), x.clone());
    let values = LazySequence::from_fn(move |n| {
        a.row_prefix(n, bound)
            .into_iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, v)| acc + v * xs.get(i + 1))
    })
    .memoized()
    .with_guards(op.guards())
    .with_guards(x.guards());
    Ok(TruncatedApply {
        values,
        bound,
        op: op.clone(),
    })
}

/// Matrix product `left * right`. Infinite rows of `left` are cut at `row_bound`,
/// and the product is then only valid for rows up to `row_bound`.
pub fn compose<T: Scalar>(
    left: &TriangleOperator<T>,
    right: &TriangleOperator<T>,
    row_bound: Option<usize>,
) -> Result<TriangleOperator<T>> {
    let left_infinite = left.row_extent(1).is_none();
    if left_infinite && row_bound.is_none() {
        return Err(Error::UnsupportedRow(
            "composing with infinite rows needs a row bound".into(),
        ));
    }
    if let (true, Some(bound), Some(limit)) = (left_infinite, row_bound, right.row_limit) {
        if bound > limit {
            return Err(Error::RowBoundExceeded { needed: bound, limit });
        }
    }
    let right_infinite = right.row_extent(1).is_none();
    let inner_len = {
        let left = left.clone();
        move |n: usize| left.row_extent(n).unwrap_or_else(|| row_bound.unwrap_or(0))
    };
    let structure = if left.is_strict() && right.is_strict() {
        Structure::StrictTriangle
    } else if right_infinite {
        Structure::RowEvaluable(RowExtent::Infinite)
    } else if left.is_lower() && right.is_lower() {
        Structure::RowEvaluable(RowExtent::Lower)
    } else {
        let right = right.clone();
        let inner_len = inner_len.clone();
        Structure::RowEvaluable(RowExtent::Finite(Arc::new(move |n| {
            (1..=inner_len(n))
                .map(|j| right.row_extent(j).unwrap_or(0))
                .max()
                .unwrap_or(0)
        })))
    };
    let (l, r) = (left.clone(), right.clone());
    let base = if right_infinite {
        TriangleOperator::from_entries(structure, move |n, k| {
            l.row_prefix(n, inner_len(n))
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .fold(T::zero(), |acc, (j, v)| acc + v * r.entry(j + 1, k))
        })
    } else {
        TriangleOperator::from_rows(structure, move |n| {
            let mut out: Vec<T> = Vec::new();
            for (j, v) in l.row_prefix(n, inner_len(n)).into_iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let rj = r.row(j + 1);
                if out.len() < rj.len() {
                    out.resize(rj.len(), T::zero());
                }
                for (o, x) in out.iter_mut().zip(rj.iter()) {
                    *o += v.clone() * x.clone();
                }
            }
            out
        })
    };
    let mut out = base
    .with_guards(left.guards())
    .with_guards(right.guards());
    if let Some(limit) = left.row_limit {
        out = out.with_row_limit(limit);
    }
    if let Some(limit) = right.row_limit {
        out = out.with_row_limit(limit);
    }
    if left_infinite {
        out = out.with_row_limit(row_bound.expect("checked above"));
    }
    Ok(out)
}
