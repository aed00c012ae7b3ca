//! The condition battery: each condition as a statistic on N×N truncations.
//!
//! `K0` below is the smallest schedule size; per-column (per-row) conditions
//! are checked for the first `K0` columns (rows), so the column set stays
//! fixed while N grows.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::evidence::{
    subset_search, window, ConditionVerdict, LimitEstimate, StatKind, TracePoint,
    TruncationSchedule, Witness,
};
use crate::operators::TriangleOperator;
use crate::scalar::Scalar;

/// Rows searched exhaustively for the lower bound of the subset conditions.
pub const SUBSET_ROWS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConditionId {
    /// `sup_{n,k} |a_nk| < ∞`
    C11,
    /// `lim_n a_nk = α_k` for each k
    C12,
    /// `sup_k sum_n |a_nk| < ∞`
    C13,
    /// `sup_{k,m} |sum_{n<=m} a_nk| < ∞`
    C14,
    /// `sum_n a_nk` convergent for each k
    C15,
    /// `sum_n a_nk = 0` for each k
    C16,
    /// `sup_{N,K finite} |sum_{n in N} sum_{k in K} a_nk| < ∞`
    C20,
    /// `lim_k a_nk = 0` for each n
    C21,
    /// C20 for `a_nk - a_{n,k+1}`
    C22,
    /// C20 for `a_nk - a_{n,k-1}`
    C23,
}

impl ConditionId {
    pub const ALL: [ConditionId; 10] = [
        ConditionId::C11,
        ConditionId::C12,
        ConditionId::C13,
        ConditionId::C14,
        ConditionId::C15,
        ConditionId::C16,
        ConditionId::C20,
        ConditionId::C21,
        ConditionId::C22,
        ConditionId::C23,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::C11 => "C11",
            ConditionId::C12 => "C12",
            ConditionId::C13 => "C13",
            ConditionId::C14 => "C14",
            ConditionId::C15 => "C15",
            ConditionId::C16 => "C16",
            ConditionId::C20 => "C20",
            ConditionId::C21 => "C21",
            ConditionId::C22 => "C22",
            ConditionId::C23 => "C23",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    pub fn describe(self) -> &'static str {
        match self {
            ConditionId::C11 => "entries bounded",
            ConditionId::C12 => "column limits exist",
            ConditionId::C13 => "column absolute sums bounded",
            ConditionId::C14 => "column partial sums bounded",
            ConditionId::C15 => "column series convergent",
            ConditionId::C16 => "column series sum to zero",
            ConditionId::C20 => "block sums over finite index sets bounded",
            ConditionId::C21 => "row entries tend to zero",
            ConditionId::C22 => "block sums of forward column differences bounded",
            ConditionId::C23 => "block sums of backward column differences bounded",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A condition as used in a recipe. `zero_limit` turns C12 into "column
/// limits exist and are zero".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConditionSpec {
    pub id: ConditionId,
    pub zero_limit: bool,
}

impl ConditionSpec {
    pub const fn plain(id: ConditionId) -> Self {
        ConditionSpec { id, zero_limit: false }
    }

    pub const fn zero_limit(id: ConditionId) -> Self {
        ConditionSpec { id, zero_limit: true }
    }

    pub fn label(&self) -> String {
        if self.zero_limit {
            format!("{} (zero limits)", self.id)
        } else {
            self.id.to_string()
        }
    }
}

pub fn check_condition<T: Scalar>(
    id: ConditionId,
    a: &TriangleOperator<T>,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    check_condition_spec(ConditionSpec::plain(id), a, sched)
}

pub fn check_condition_spec<T: Scalar>(
    spec: ConditionSpec,
    a: &TriangleOperator<T>,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    let nmax = sched.max();
    let extra = usize::from(spec.id == ConditionId::C22);
    let block = a.block(nmax, nmax + extra)?;
    let k0 = sched.first();
    let v = match spec.id {
        ConditionId::C11 => max_entry(&block, sched),
        ConditionId::C12 if spec.zero_limit => column_window_max(&block, k0, sched),
        ConditionId::C12 => column_limits(&block, k0, sched),
        ConditionId::C13 => column_abs_sums(&block, sched),
        ConditionId::C14 => column_prefix_max(&block, sched),
        ConditionId::C15 => column_series_cauchy(&block, k0, sched),
        ConditionId::C16 => column_series_zero(&block, k0, sched),
        ConditionId::C20 => block_sums(&block, sched),
        ConditionId::C21 => row_window_max(&block, k0, sched),
        ConditionId::C22 => {
            let diff: Vec<Vec<T>> = block
                .iter()
                .map(|row| row.windows(2).map(|w| w[0].clone() - w[1].clone()).collect())
                .collect();
            block_sums(&diff, sched)
        }
        ConditionId::C23 => {
            let diff: Vec<Vec<T>> = block
                .iter()
                .map(|row| {
                    (0..row.len())
                        .map(|k| {
                            let prev = if k == 0 { T::zero() } else { row[k - 1].clone() };
                            row[k].clone() - prev
                        })
                        .collect()
                })
                .collect();
            block_sums(&diff, sched)
        }
    };
    Ok(v)
}

fn argmax<T: Scalar>(best: &mut (T, usize, usize), v: T, n: usize, k: usize) {
    if v > best.0 {
        *best = (v, n, k);
    }
}

/// C11: `max_{n,k<=N} |a_nk|`.
fn max_entry<T: Scalar>(block: &[Vec<T>], sched: &TruncationSchedule) -> ConditionVerdict {
    let mut best = (T::zero(), 1, 1);
    let mut trace = Vec::new();
    let mut done = 0;
    for &n in sched.sizes() {
        // rows past `done` are new; old rows gain columns done+1..=n
        for (i, row) in block[..n].iter().enumerate() {
            let from = if i < done { done } else { 0 };
            for (k, v) in row[..n].iter().enumerate().skip(from) {
                argmax(&mut best, v.abs(), i + 1, k + 1);
            }
        }
        done = n;
        trace.push(TracePoint::of(n, &best.0));
    }
    ConditionVerdict::from_trace(StatKind::Bounded, trace, sched)
        .with_witness(Some(Witness::Cell { row: best.1, col: best.2 }))
}

/// C12: per-column oscillation over the row window, max over `k <= K0`.
fn column_limits<T: Scalar>(block: &[Vec<T>], k0: usize, sched: &TruncationSchedule) -> ConditionVerdict {
    let mut trace = Vec::new();
    let mut worst = 1;
    for &n in sched.sizes() {
        let rows = &block[window(n)];
        let mut best = (T::zero(), 1);
        for k in 0..k0.min(n) {
            let (mut lo, mut hi) = (rows[0][k].clone(), rows[0][k].clone());
            for row in rows {
                if row[k] < lo {
                    lo = row[k].clone();
                }
                if row[k] > hi {
                    hi = row[k].clone();
                }
            }
            let osc = hi - lo;
            if osc > best.0 {
                best = (osc, k + 1);
            }
        }
        worst = best.1;
        trace.push(TracePoint::of(n, &best.0));
    }
    let last = &block[sched.max() - 1];
    let limits = (0..k0)
        .map(|k| {
            let p = TracePoint::of(0, &last[k]);
            LimitEstimate { column: k + 1, value: p.value, exact: p.exact }
        })
        .collect();
    let mut v = ConditionVerdict::from_trace(StatKind::Vanishing, trace, sched)
        .with_witness(Some(Witness::Index(worst)));
    v.limits = Some(limits);
    v
}

/// C12 with zero limits: `max |a_nk|` over the row window and `k <= K0`.
fn column_window_max<T: Scalar>(block: &[Vec<T>], k0: usize, sched: &TruncationSchedule) -> ConditionVerdict {
    let mut trace = Vec::new();
    let mut best = (T::zero(), 1, 1);
    for &n in sched.sizes() {
        best = (T::zero(), 1, 1);
        for (i, row) in block.iter().enumerate().take(n).skip(window(n).start) {
            for (k, v) in row[..k0.min(n)].iter().enumerate() {
                argmax(&mut best, v.abs(), i + 1, k + 1);
            }
        }
        trace.push(TracePoint::of(n, &best.0));
    }
    ConditionVerdict::from_trace(StatKind::Vanishing, trace, sched)
        .with_witness(Some(Witness::Cell { row: best.1, col: best.2 }))
}

/// C13: `max_{k<=N} sum_{n<=N} |a_nk|`.
fn column_abs_sums<T: Scalar>(block: &[Vec<T>], sched: &TruncationSchedule) -> ConditionVerdict {
    let mut trace = Vec::new();
    let mut at = 1;
    for &n in sched.sizes() {
        let mut best = (T::zero(), 1);
        for k in 0..n {
            let s = block[..n].iter().fold(T::zero(), |acc, row| acc + row[k].abs());
            if s > best.0 {
                best = (s, k + 1);
            }
        }
        at = best.1;
        trace.push(TracePoint::of(n, &best.0));
    }
    ConditionVerdict::from_trace(StatKind::Bounded, trace, sched).with_witness(Some(Witness::Index(at)))
}

/// Column partial sums `S_m(k) = sum_{n<=m} a_nk` for `m, k <= N`.
fn column_partials<T: Scalar>(block: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let mut acc = vec![T::zero(); cols];
    block
        .iter()
        .map(|row| {
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v.clone();
            }
            acc.clone()
        })
        .collect()
}

/// C14: `max_{k,m<=N} |S_m(k)|`.
fn column_prefix_max<T: Scalar>(block: &[Vec<T>], sched: &TruncationSchedule) -> ConditionVerdict {
    let partials = column_partials(block, sched.max());
    let mut trace = Vec::new();
    let mut best = (T::zero(), 1, 1);
    let mut done = 0;
    for &n in sched.sizes() {
        for (m, row) in partials[..n].iter().enumerate() {
            let from = if m < done { done } else { 0 };
            for (k, v) in row[..n].iter().enumerate().skip(from) {
                argmax(&mut best, v.abs(), m + 1, k + 1);
            }
        }
        done = n;
        trace.push(TracePoint::of(n, &best.0));
    }
    ConditionVerdict::from_trace(StatKind::Bounded, trace, sched)
        .with_witness(Some(Witness::Cell { row: best.1, col: best.2 }))
}

/// C15: oscillation of `S_m(k)` over the window, max over `k <= K0`.
fn column_series_cauchy<T: Scalar>(block: &[Vec<T>], k0: usize, sched: &TruncationSchedule) -> ConditionVerdict {
    let partials = column_partials(block, k0);
    let transposed: Vec<Vec<T>> = (0..k0).map(|k| partials.iter().map(|r| r[k].clone()).collect()).collect();
    let mut trace = Vec::new();
    let mut limits = Vec::new();
    for &n in sched.sizes() {
        let mut best = T::zero();
        for col in &transposed {
            let w = &col[window(n)];
            let lo = w.iter().fold(w[0].clone(), |m, v| if *v < m { v.clone() } else { m });
            let hi = w.iter().fold(w[0].clone(), |m, v| if *v > m { v.clone() } else { m });
            let osc = hi - lo;
            if osc > best {
                best = osc;
            }
        }
        trace.push(TracePoint::of(n, &best));
    }
    for (k, col) in transposed.iter().enumerate() {
        let p = TracePoint::of(0, col.last().expect("nonempty schedule"));
        limits.push(LimitEstimate { column: k + 1, value: p.value, exact: p.exact });
    }
    let mut v = ConditionVerdict::from_trace(StatKind::Vanishing, trace, sched);
    v.limits = Some(limits);
    v
}

/// C16: `max |S_m(k)|` over the window and `k <= K0`.
fn column_series_zero<T: Scalar>(block: &[Vec<T>], k0: usize, sched: &TruncationSchedule) -> ConditionVerdict {
    let partials = column_partials(block, k0);
    let mut trace = Vec::new();
    let mut best = (T::zero(), 1, 1);
    for &n in sched.sizes() {
        best = (T::zero(), 1, 1);
        for (m, row) in partials.iter().enumerate().take(n).skip(window(n).start) {
            for (k, v) in row[..k0.min(n)].iter().enumerate() {
                argmax(&mut best, v.abs(), m + 1, k + 1);
            }
        }
        trace.push(TracePoint::of(n, &best.0));
    }
    ConditionVerdict::from_trace(StatKind::Vanishing, trace, sched)
        .with_witness(Some(Witness::Cell { row: best.1, col: best.2 }))
}

/// C21: `max |a_nk|` over rows `n <= K0` and the column window.
fn row_window_max<T: Scalar>(block: &[Vec<T>], k0: usize, sched: &TruncationSchedule) -> ConditionVerdict {
    let mut trace = Vec::new();
    let mut best = (T::zero(), 1, 1);
    for &n in sched.sizes() {
        best = (T::zero(), 1, 1);
        for (i, row) in block[..k0.min(n)].iter().enumerate() {
            for (k, v) in row[window(n)].iter().enumerate() {
                argmax(&mut best, v.abs(), i + 1, window(n).start + k + 1);
            }
        }
        trace.push(TracePoint::of(n, &best.0));
    }
    ConditionVerdict::from_trace(StatKind::Vanishing, trace, sched)
        .with_witness(Some(Witness::Cell { row: best.1, col: best.2 }))
}

/// Sum over the columns of one sign, the larger of the two.
fn best_sign_sum(sums: &[f64]) -> f64 {
    let pos: f64 = sums.iter().filter(|v| **v > 0.0).sum();
    let neg: f64 = sums.iter().filter(|v| **v < 0.0).sum();
    pos.max(-neg)
}

/// Alternating row/column sign selection on the whole truncation, started
/// from all rows, the odd rows and the even rows.
fn greedy_block(block: &[Vec<f64>], n: usize) -> (f64, Vec<usize>, Vec<usize>) {
    let mut best = (0.0, Vec::new(), Vec::new());
    let starts: [Box<dyn Fn(usize) -> bool>; 3] =
        [Box::new(|_| true), Box::new(|i| i % 2 == 0), Box::new(|i| i % 2 == 1)];
    for (sign, start) in [1.0, -1.0].into_iter().flat_map(|s| starts.iter().map(move |f| (s, f))) {
        let mut rows: Vec<usize> = (0..n).filter(|&i| start(i)).collect();
        let mut cols: Vec<usize>;
        for _ in 0..4 {
            cols = (0..n)
                .filter(|&k| sign * rows.iter().map(|&i| block[i][k]).sum::<f64>() > 0.0)
                .collect();
            if cols.is_empty() {
                break;
            }
            let value: f64 = sign * rows.iter().map(|&i| cols.iter().map(|&k| block[i][k]).sum::<f64>()).sum::<f64>();
            if value > best.0 {
                best = (value, rows.iter().map(|i| i + 1).collect(), cols.iter().map(|k| k + 1).collect());
            }
            let next: Vec<usize> = (0..n)
                .filter(|&i| sign * cols.iter().map(|&k| block[i][k]).sum::<f64>() > 0.0)
                .collect();
            if next.is_empty() || next == rows {
                break;
            }
            rows = next;
        }
    }
    best
}

/// C20 and its difference variants: sup over finite index sets N, K of
/// `|sum_{n in N, k in K} a_nk|`, known through an interval. The upper bound is
/// `sum_{n,k<=N} |a_nk|`; the lower bound is the best of an exhaustive search
/// over row subsets of the first [`SUBSET_ROWS`] rows (with the optimal column
/// set for each), alternating sign selection on the full truncation, and the
/// largest single entry.
fn block_sums<T: Scalar>(block: &[Vec<T>], sched: &TruncationSchedule) -> ConditionVerdict {
    let fblock: Vec<Vec<f64>> = block.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut total = T::zero();
    let mut done = 0;
    let mut best_lower = (0.0f64, Witness::Cell { row: 1, col: 1 });
    for &n in sched.sizes() {
        for (i, row) in block[..n].iter().enumerate() {
            let from = if i < done { done } else { 0 };
            for v in &row[from..n] {
                total += v.abs();
            }
        }
        done = n;
        upper.push(TracePoint::of(n, &total));

        let head: Vec<Vec<f64>> = fblock[..SUBSET_ROWS.min(n)].iter().map(|r| r[..n].to_vec()).collect();
        let (sub, rows) = subset_search(&head, best_sign_sum);
        if sub > best_lower.0 {
            let sums: Vec<f64> = (0..n).map(|k| rows.iter().map(|&i| head[i - 1][k]).sum()).collect();
            let pos: f64 = sums.iter().filter(|v| **v > 0.0).sum();
            let sign = if pos >= sub { 1.0 } else { -1.0 };
            let cols = (0..n).filter(|&k| sign * sums[k] > 0.0).map(|k| k + 1).collect();
            best_lower = (sub, Witness::Subsets { rows, cols });
        }
        let (g, rows, cols) = greedy_block(&fblock, n);
        if g > best_lower.0 {
            best_lower = (g, Witness::Subsets { rows, cols });
        }
        for (i, row) in fblock[..n].iter().enumerate() {
            for (k, v) in row[..n].iter().enumerate() {
                if v.abs() > best_lower.0 {
                    best_lower = (v.abs(), Witness::Cell { row: i + 1, col: k + 1 });
                }
            }
        }
        lower.push(TracePoint { size: n, value: best_lower.0, exact: None });
    }
    ConditionVerdict::from_bounds(upper, lower, sched).with_witness(Some(best_lower.1))
}
