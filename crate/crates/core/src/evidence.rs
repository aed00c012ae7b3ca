//! Three-valued verdicts for sup/limit conditions sampled on a truncation schedule.
//!
//! No finite computation certifies an infinite sup, so every such question
//! is answered with [`Status::HoldsAtTruncation`], [`Status::DivergenceEvidence`]
//! or [`Status::Inconclusive`] plus the statistic trace that produced it.
//!
//! Two statistic shapes are classified:
//!
//! * [`StatKind::Bounded`]: a sup over a growing truncation (non-decreasing in N).
//!   Holds when the last two values agree to the tolerance, or when the
//!   increments between consecutive sizes contract geometrically by at least
//!   the growth ratio. Diverges when each of the last three steps either
//!   multiplies the statistic by the growth ratio or adds at least as much as
//!   the step before (linear or logarithmic growth).
//! * [`StatKind::Vanishing`]: a quantity that must tend to zero (tail
//!   oscillation, tail magnitude). Holds when it falls to the tolerance relative
//!   to its largest sampled value, or contracts by the growth ratio over the
//!   last three steps. Diverges when it fails to decrease over the last three
//!   steps, or when its decrements contract geometrically toward a floor that
//!   stays at least half its last value.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::{LazySequence, SpaceTag};

pub const SCHEDULE_ENV: &str = "SUMKIT_SCHEDULE";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSchedule {
    sizes: Vec<usize>,
    tolerance: f64,
    growth_ratio: f64,
}

impl Default for TruncationSchedule {
    fn default() -> Self {
        TruncationSchedule {
            sizes: vec![16, 32, 64, 128, 256],
            tolerance: 1e-9,
            growth_ratio: 1.5,
        }
    }
}

impl TruncationSchedule {
    pub fn new(sizes: Vec<usize>, tolerance: f64, growth_ratio: f64) -> Result<Self> {
        if sizes.len() < 3 {
            return Err(Error::InvalidSchedule("at least 3 sizes are required".into()));
        }
        if sizes[0] == 0 {
            return Err(Error::InvalidSchedule("sizes must be positive".into()));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSchedule("sizes must be strictly increasing".into()));
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::InvalidSchedule(format!("bad tolerance {tolerance}")));
        }
        if !(growth_ratio.is_finite() && growth_ratio > 1.0) {
            return Err(Error::InvalidSchedule(format!(
                "growth ratio must exceed 1, got {growth_ratio}"
            )));
        }
        Ok(TruncationSchedule {
            sizes,
            tolerance,
            growth_ratio,
        })
    }

    /// Parses `"16,32,64,128,256;tol=1e-9;ratio=1.5"`. `tol` and `ratio` are optional.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(';');
        let sizes = parts
            .next()
            .unwrap_or("")
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSchedule(format!("bad size {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let defaults = TruncationSchedule::default();
        let (mut tol, mut ratio) = (defaults.tolerance, defaults.growth_ratio);
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidSchedule(format!("expected key=value, got {part:?}")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSchedule(format!("bad number {value:?}")))?;
            match key.trim() {
                "tol" => tol = value,
                "ratio" => ratio = value,
                other => return Err(Error::InvalidSchedule(format!("unknown key {other:?}"))),
            }
        }
        TruncationSchedule::new(sizes, tol, ratio)
    }

    /// The schedule from `SUMKIT_SCHEDULE`, or the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(SCHEDULE_ENV) {
            Ok(s) if !s.trim().is_empty() => TruncationSchedule::parse(&s),
            _ => Ok(TruncationSchedule::default()),
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn first(&self) -> usize {
        self.sizes[0]
    }

    pub fn max(&self) -> usize {
        *self.sizes.last().expect("schedule is never empty")
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn growth_ratio(&self) -> f64 {
        self.growth_ratio
    }

    /// The same schedule with one more doubling of the largest size.
    pub fn extended(&self) -> Self {
        let mut sizes = self.sizes.clone();
        sizes.push(self.max() * 2);
        TruncationSchedule { sizes, ..*self }
    }

    pub fn render(&self) -> String {
        let sizes: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        format!(
            "{};tol={:e};ratio={}",
            sizes.join(","),
            self.tolerance,
            self.growth_ratio
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    HoldsAtTruncation,
    DivergenceEvidence,
    Inconclusive,
}

impl Status {
    /// Conjunction: any divergence wins, all-hold holds, otherwise inconclusive.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (DivergenceEvidence, _) | (_, DivergenceEvidence) => DivergenceEvidence,
            (HoldsAtTruncation, HoldsAtTruncation) => HoldsAtTruncation,
            _ => Inconclusive,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Status>) -> Status {
        items
            .into_iter()
            .fold(Status::HoldsAtTruncation, Status::and)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::HoldsAtTruncation => "HOLDS_AT_TRUNCATION",
            Status::DivergenceEvidence => "DIVERGENCE_EVIDENCE",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StatKind {
    Bounded,
    Vanishing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub size: usize,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl TracePoint {
    pub fn of<T: Scalar>(size: usize, v: &T) -> Self {
        TracePoint {
            size,
            value: v.to_f64(),
            exact: T::EXACT.then(|| v.render()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Index(usize),
    Cell { row: usize, col: usize },
    Subsets { rows: Vec<usize>, cols: Vec<usize> },
}

/// Per-column limit estimate `alpha_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub column: usize,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub label: String,
    pub trace: Vec<TracePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: ConditionVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub status: Status,
    pub kind: StatKind,
    pub trace: Vec<TracePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_trace: Option<Vec<TracePoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limits: Option<Vec<LimitEstimate>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<CrossCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<NamedVerdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionVerdict {
    pub fn from_trace(kind: StatKind, trace: Vec<TracePoint>, sched: &TruncationSchedule) -> Self {
        let values: Vec<f64> = trace.iter().map(|p| p.value).collect();
        let status = match kind {
            StatKind::Bounded => classify_bounded(&values, sched),
            StatKind::Vanishing => classify_vanishing(&values, sched),
        };
        ConditionVerdict {
            status,
            kind,
            trace,
            lower_trace: None,
            witness: None,
            limits: None,
            cross_checks: Vec::new(),
            components: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Sup known only through a certified interval `[lower, upper]`: holds when the
    /// upper bound stabilizes, diverges when the lower bound grows.
    pub fn from_bounds(
        upper: Vec<TracePoint>,
        lower: Vec<TracePoint>,
        sched: &TruncationSchedule,
    ) -> Self {
        let up: Vec<f64> = upper.iter().map(|p| p.value).collect();
        let lo: Vec<f64> = lower.iter().map(|p| p.value).collect();
        let status = if classify_bounded(&up, sched) == Status::HoldsAtTruncation {
            Status::HoldsAtTruncation
        } else if classify_bounded(&lo, sched) == Status::DivergenceEvidence {
            Status::DivergenceEvidence
        } else {
            Status::Inconclusive
        };
        let mut v = ConditionVerdict::from_trace(StatKind::Bounded, upper, sched);
        v.status = status;
        v.lower_trace = Some(lower);
        v
    }

    /// Conjunction of named parts; the primary trace is taken from the first part.
    pub fn conjunction(parts: Vec<NamedVerdict>) -> Self {
        assert!(!parts.is_empty(), "conjunction of nothing");
        let status = Status::all(parts.iter().map(|p| p.verdict.status));
        let first = &parts[0].verdict;
        ConditionVerdict {
            status,
            kind: first.kind,
            trace: first.trace.clone(),
            lower_trace: first.lower_trace.clone(),
            witness: first.witness.clone(),
            limits: first.limits.clone(),
            cross_checks: Vec::new(),
            components: parts,
            notes: Vec::new(),
        }
    }

    pub fn final_value(&self) -> f64 {
        self.trace.last().map(|p| p.value).unwrap_or(f64::NAN)
    }

    pub fn with_witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }
}

fn growing_step(v: &[f64], s: usize, ratio: f64) -> bool {
    let (a, b) = (v[s - 1], v[s]);
    if a <= 0.0 {
        return b > 0.0;
    }
    if b >= ratio * a {
        return true;
    }
    if s >= 2 {
        let before = v[s - 1] - v[s - 2];
        let now = b - a;
        return before > 0.0 && now >= before;
    }
    false
}

fn contracting_step(v: &[f64], s: usize, ratio: f64, tol: f64) -> bool {
    let before = (v[s - 1] - v[s - 2]).abs();
    let now = (v[s] - v[s - 1]).abs();
    now <= tol * v[s].abs() || (before > 0.0 && now <= before / ratio)
}

pub fn classify_bounded(v: &[f64], sched: &TruncationSchedule) -> Status {
    let m = v.len();
    if m < 2 || v.iter().any(|x| !x.is_finite()) {
        return if v.iter().any(|x| x.is_infinite()) {
            Status::DivergenceEvidence
        } else {
            Status::Inconclusive
        };
    }
    let (tol, ratio) = (sched.tolerance, sched.growth_ratio);
    let (prev, last) = (v[m - 2], v[m - 1]);
    if (last - prev).abs() <= tol * prev.abs().max(last.abs()) {
        return Status::HoldsAtTruncation;
    }
    if m >= 4 && (m - 3..m).all(|s| growing_step(v, s, ratio)) {
        return Status::DivergenceEvidence;
    }
    if m >= 3 && (2.max(m.saturating_sub(3))..m).all(|s| contracting_step(v, s, ratio, tol)) {
        return Status::HoldsAtTruncation;
    }
    Status::Inconclusive
}

pub fn classify_vanishing(v: &[f64], sched: &TruncationSchedule) -> Status {
    let m = v.len();
    if m < 2 || v.iter().any(|x| x.is_nan()) {
        return Status::Inconclusive;
    }
    let (tol, ratio) = (sched.tolerance, sched.growth_ratio);
    let peak = v.iter().cloned().fold(0.0f64, f64::max);
    let last = v[m - 1];
    if last <= tol * peak {
        return Status::HoldsAtTruncation;
    }
    if m >= 4 && (m - 3..m).all(|s| v[s - 1] > 0.0 && v[s] >= v[s - 1]) {
        return Status::DivergenceEvidence;
    }
    if (1.max(m.saturating_sub(3))..m).all(|s| v[s] <= v[s - 1] / ratio) {
        return Status::HoldsAtTruncation;
    }
    // decreasing, but the decrements contract geometrically toward a nonzero floor
    if m >= 4 {
        let dec: Vec<f64> = v.windows(2).map(|w| w[0] - w[1]).collect();
        let k = dec.len();
        let geometric = (k - 2..k).all(|i| dec[i - 1] > 0.0 && dec[i] >= 0.0 && dec[i] <= dec[i - 1] / ratio);
        if geometric {
            let q = dec[k - 1] / dec[k - 2];
            let floor = last - dec[k - 1] * q / (1.0 - q);
            if floor >= 0.5 * last {
                return Status::DivergenceEvidence;
            }
        }
    }
    Status::Inconclusive
}

/// Indices `N/2+1 ..= N` as a 0-based slice range.
pub(crate) fn window(n: usize) -> std::ops::Range<usize> {
    n / 2..n
}

fn oscillation<T: Scalar>(vals: &[T]) -> T {
    let mut it = vals.iter();
    let Some(first) = it.next() else {
        return T::zero();
    };
    let (mut lo, mut hi) = (first.clone(), first.clone());
    for v in it {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    hi - lo
}

fn max_abs<T: Scalar>(vals: &[T]) -> (T, usize) {
    let mut best = (T::zero(), 0);
    for (i, v) in vals.iter().enumerate() {
        let a = v.abs();
        if a > best.0 {
            best = (a, i);
        }
    }
    best
}

/// `max over nonempty row subsets S of score(column sums of S)`, walking all
/// subsets in Gray-code order. Returns the value and the chosen rows, 1-based.
pub fn subset_search(rows: &[Vec<f64>], score: impl Fn(&[f64]) -> f64) -> (f64, Vec<usize>) {
    let r = rows.len();
    assert!(r <= 20, "exhaustive subset search over {r} rows");
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut acc = vec![0.0f64; width];
    let (mut best, mut best_mask) = (0.0f64, 0u32);
    let mut mask = 0u32;
    for step in 1u32..(1u32 << r) {
        let bit = step.trailing_zeros() as usize;
        let sign = if mask & (1 << bit) == 0 { 1.0 } else { -1.0 };
        mask ^= 1 << bit;
        for (a, v) in acc.iter_mut().zip(&rows[bit]) {
            *a += sign * v;
        }
        let total = score(&acc);
        if total > best {
            best = total;
            best_mask = mask;
        }
    }
    let chosen = (0..r).filter(|i| best_mask & (1 << i) != 0).map(|i| i + 1).collect();
    (best, chosen)
}

/// `max over nonempty row subsets S of sum_k |sum_{n in S} rows[n][k]|`.
pub fn subset_sup(rows: &[Vec<f64>]) -> (f64, Vec<usize>) {
    subset_search(rows, |acc| acc.iter().map(|v| v.abs()).sum())
}

/// Evidence that `x` belongs to the classical space `tag`.
///
/// Statistics at truncation N: `l1` sum of |x_k|; `linf` max |x_k|; `c`
/// oscillation of x over the window (N/2, N]; `c0` max |x_k| over that window;
/// `bs` max |s_n| with s the partial sums; `cs` oscillation of s over the
/// window; `c0s` max |s_n| over the window.
pub fn space_evidence<T: Scalar>(
    x: &LazySequence<T>,
    tag: SpaceTag,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    let xs = x.try_take(sched.max())?;
    let partials: Vec<T> = xs
        .iter()
        .scan(T::zero(), |acc, v| {
            *acc = acc.clone() + v.clone();
            Some(acc.clone())
        })
        .collect();
    let mut trace = Vec::with_capacity(sched.sizes().len());
    let mut witness = None;
    let kind = match tag {
        SpaceTag::L1 | SpaceTag::Linf | SpaceTag::Bs => StatKind::Bounded,
        _ => StatKind::Vanishing,
    };
    for &n in sched.sizes() {
        let stat = match tag {
            SpaceTag::L1 => xs[..n].iter().fold(T::zero(), |acc, v| acc + v.abs()),
            SpaceTag::Linf => {
                let (m, i) = max_abs(&xs[..n]);
                witness = Some(Witness::Index(i + 1));
                m
            }
            SpaceTag::Bs => {
                let (m, i) = max_abs(&partials[..n]);
                witness = Some(Witness::Index(i + 1));
                m
            }
            SpaceTag::C => oscillation(&xs[window(n)]),
            SpaceTag::C0 => max_abs(&xs[window(n)]).0,
            SpaceTag::Cs => oscillation(&partials[window(n)]),
            SpaceTag::C0s => max_abs(&partials[window(n)]).0,
        };
        trace.push(TracePoint::of(n, &stat));
    }
    Ok(ConditionVerdict::from_trace(kind, trace, sched).with_witness(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn sched() -> TruncationSchedule {
        TruncationSchedule::default()
    }

    #[test]
    fn subset_sup_small_cases() {
        let rows = vec![vec![1.0, -2.0], vec![-1.0, 3.0], vec![0.5, 1.0]];
        // by hand: {2} gives 4, {2,3} gives |-0.5| + |4| = 4.5, the rest less
        let (v, chosen) = subset_sup(&rows);
        assert_eq!(v, 4.5);
        assert_eq!(chosen, vec![2, 3]);
        assert_eq!(subset_sup(&[]).0, 0.0);
    }

    #[test]
    fn schedule_validation() {
        assert!(TruncationSchedule::new(vec![16, 32], 1e-9, 1.5).is_err());
        assert!(TruncationSchedule::new(vec![16, 16, 32], 1e-9, 1.5).is_err());
        assert!(TruncationSchedule::new(vec![0, 16, 32], 1e-9, 1.5).is_err());
        assert!(TruncationSchedule::new(vec![4, 8, 16], 1e-9, 1.0).is_err());
        assert!(TruncationSchedule::new(vec![4, 8, 16], 1e-9, 2.0).is_ok());
    }

    #[test]
    fn schedule_parse_and_render() {
        let s = TruncationSchedule::parse("16,32,64,128,256;tol=1e-9;ratio=1.5").unwrap();
        assert_eq!(s, TruncationSchedule::default());
        assert_eq!(TruncationSchedule::parse(&s.render()).unwrap(), s);
        let short = TruncationSchedule::parse("8,16,32").unwrap();
        assert_eq!(short.tolerance(), 1e-9);
        assert!(TruncationSchedule::parse("8,16,32;eps=1").is_err());
        assert!(TruncationSchedule::parse("8,x,32").is_err());
        assert_eq!(s.extended().max(), 512);
    }

    #[test]
    fn status_conjunction() {
        use Status::*;
        assert_eq!(HoldsAtTruncation.and(HoldsAtTruncation), HoldsAtTruncation);
        assert_eq!(HoldsAtTruncation.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(DivergenceEvidence), DivergenceEvidence);
        assert_eq!(Status::all([]), HoldsAtTruncation);
    }

    #[test]
    fn ones_bounded_not_summable() {
        let x = LazySequence::<Exact>::ones();
        let linf = space_evidence(&x, SpaceTag::Linf, &sched()).unwrap();
        assert_eq!(linf.status, Status::HoldsAtTruncation);
        assert!(linf.trace.iter().all(|p| p.value == 1.0));
        let l1 = space_evidence(&x, SpaceTag::L1, &sched()).unwrap();
        assert_eq!(l1.status, Status::DivergenceEvidence);
        let sizes: Vec<f64> = sched().sizes().iter().map(|&n| n as f64).collect();
        let vals: Vec<f64> = l1.trace.iter().map(|p| p.value).collect();
        assert_eq!(vals, sizes);
    }

    #[test]
    fn inverse_squares_summable() {
        // exact partial sums sum_{k<=N} 1/k^2, compared with pi^2/6 from above
        let x = LazySequence::<Exact>::power(-2);
        let v = space_evidence(&x, SpaceTag::L1, &sched()).unwrap();
        assert_eq!(v.status, Status::HoldsAtTruncation);
        let limit = std::f64::consts::PI.powi(2) / 6.0;
        for p in &v.trace {
            // tail of sum 1/k^2 beyond N lies in (1/(N+1), 1/N)
            let gap = limit - p.value;
            assert!(gap > 1.0 / (p.size as f64 + 1.0) && gap < 1.0 / p.size as f64);
        }
    }

    #[test]
    fn harmonic_growth_is_divergence() {
        let x = LazySequence::<f64>::harmonic();
        let v = space_evidence(&x, SpaceTag::L1, &sched()).unwrap();
        assert_eq!(v.status, Status::DivergenceEvidence);
    }

    #[test]
    fn convergence_spaces() {
        let s = sched();
        let alt = LazySequence::<f64>::alternating();
        assert_eq!(space_evidence(&alt, SpaceTag::C, &s).unwrap().status, Status::DivergenceEvidence);
        assert_eq!(space_evidence(&alt, SpaceTag::Bs, &s).unwrap().status, Status::HoldsAtTruncation);
        assert_eq!(space_evidence(&alt, SpaceTag::Cs, &s).unwrap().status, Status::DivergenceEvidence);
        let h = LazySequence::<f64>::harmonic();
        assert_eq!(space_evidence(&h, SpaceTag::C0, &s).unwrap().status, Status::HoldsAtTruncation);
        assert_eq!(space_evidence(&h, SpaceTag::C, &s).unwrap().status, Status::HoldsAtTruncation);
        let ones = LazySequence::<f64>::ones();
        assert_eq!(space_evidence(&ones, SpaceTag::C, &s).unwrap().status, Status::HoldsAtTruncation);
        assert_eq!(space_evidence(&ones, SpaceTag::C0, &s).unwrap().status, Status::DivergenceEvidence);
        // alternating harmonic series converges to -ln 2, not to 0
        let ah = LazySequence::<f64>::from_fn(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / k as f64);
        assert_eq!(space_evidence(&ah, SpaceTag::Cs, &s).unwrap().status, Status::HoldsAtTruncation);
        assert_eq!(space_evidence(&ah, SpaceTag::C0s, &s).unwrap().status, Status::DivergenceEvidence);
    }

    #[test]
    fn zero_sequence_holds_everywhere() {
        let z = LazySequence::<Exact>::zeros();
        for tag in SpaceTag::ALL {
            let v = space_evidence(&z, tag, &sched()).unwrap();
            assert_eq!(v.status, Status::HoldsAtTruncation, "{tag}");
        }
    }

    #[test]
    fn slow_convergence_is_not_called_divergent() {
        // sum k^-1.05 converges; the schedule cannot tell, so it must not claim divergence
        let x = LazySequence::<f64>::from_fn(|k| (k as f64).powf(-1.05));
        let v = space_evidence(&x, SpaceTag::L1, &sched()).unwrap();
        assert_ne!(v.status, Status::DivergenceEvidence);
    }

    #[test]
    fn bounded_classifier_edges() {
        let s = sched();
        assert_eq!(classify_bounded(&[0.0, 0.0, 0.0], &s), Status::HoldsAtTruncation);
        assert_eq!(classify_bounded(&[1.0, 2.0, 4.0, 8.0, 16.0], &s), Status::DivergenceEvidence);
        assert_eq!(classify_bounded(&[1.0, 2.0], &s), Status::Inconclusive);
        assert_eq!(classify_bounded(&[1.0, f64::INFINITY, 1.0], &s), Status::DivergenceEvidence);
    }
}
