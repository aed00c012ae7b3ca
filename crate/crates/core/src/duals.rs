//! α, β and γ duals of the two domains, through the matrices E, F and H.
//!
//! With `x = T⁻¹y` for the defining triangle T, `a_n x_n = (Ey)_n` and
//! `sum_{k<=n} a_k x_k = (Hy)_n`, so dual membership of `a` becomes a
//! matrix-class question for E (α) or H (β, γ) on ℓ₁.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::evidence::{
    space_evidence, subset_sup, ConditionVerdict, CrossCheck, NamedVerdict, StatKind,
    TracePoint, TruncationSchedule, Witness,
};
use crate::operators::{DomainName, RowExtent, Structure, TriangleOperator, WeightPair};
use crate::scalar::Scalar;
use crate::seq::{LazySequence, SpaceTag};

/// Rows used by the exhaustive subset cross-check of the α statistic.
pub const SUBSET_ROWS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DualMatrixKind {
    /// E, for the α-dual of `∫bv(u,w)`.
    EAlphaInt,
    /// F, for the α-dual of `d(bv(u,w))`.
    FAlphaD,
    /// H, for the β- and γ-duals of `∫bv(u,w)`.
    HBetaInt,
    /// H with `j` in place of `1/j`, for `d(bv(u,w))`.
    HBetaD,
}

impl DualMatrixKind {
    pub fn alpha(space: DomainName) -> Self {
        match space {
            DomainName::IntBv => DualMatrixKind::EAlphaInt,
            DomainName::DBv => DualMatrixKind::FAlphaD,
        }
    }

    pub fn beta(space: DomainName) -> Self {
        match space {
            DomainName::IntBv => DualMatrixKind::HBetaInt,
            DomainName::DBv => DualMatrixKind::HBetaD,
        }
    }

    pub fn space(self) -> DomainName {
        match self {
            DualMatrixKind::EAlphaInt | DualMatrixKind::HBetaInt => DomainName::IntBv,
            DualMatrixKind::FAlphaD | DualMatrixKind::HBetaD => DomainName::DBv,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DualMatrixKind::EAlphaInt => "E_ALPHA_INT",
            DualMatrixKind::FAlphaD => "F_ALPHA_D",
            DualMatrixKind::HBetaInt => "H_BETA_INT",
            DualMatrixKind::HBetaD => "H_BETA_D",
        }
    }
}

impl fmt::Display for DualMatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `1/j` on `∫bv`, `j` on `d(bv)`.
pub(crate) fn index_factor<T: Scalar>(space: DomainName, j: usize) -> T {
    match space {
        DomainName::IntBv => T::from_usize(j).recip(),
        DomainName::DBv => T::from_usize(j),
    }
}

/// Row `n` of the H-type matrix for an arbitrary coefficient row `a`:
/// `c(k) a_k/(u_k w_k) + (1/u_k)(1/w_k - 1/w_{k+1}) sum_{j=k+1..n} c(j) a_j`
/// for `k <= n`, with `c(j)` the index factor of `space`.
pub(crate) fn pairing_row<T: Scalar>(
    space: DomainName,
    wp: &WeightPair<T>,
    a: impl Fn(usize) -> T,
    n: usize,
) -> Vec<T> {
    let mut row = vec![T::zero(); n];
    let mut tail = T::zero();
    for k in (1..=n).rev() {
        let ak = a(k);
        let diag = index_factor::<T>(space, k) * ak.clone() / (wp.u(k) * wp.w(k));
        row[k - 1] = diag + wp.inverse_difference(k) * tail.clone();
        tail += index_factor::<T>(space, k) * ak;
    }
    row
}

/// E, F or H built from `a` and the weights, lower triangular.
///
/// H is taken with every column `k <= n` carrying both the diagonal-type term
/// and the tail sum; this is the form that makes `(Hy)_n = sum_{k<=n} a_k x_k`
/// hold exactly.
pub fn build_dual_matrix<T: Scalar>(
    kind: DualMatrixKind,
    a: &LazySequence<T>,
    wp: &WeightPair<T>,
) -> TriangleOperator<T> {
    let (a2, wp2) = (a.clone(), wp.clone());
    let space = kind.space();
    let structure = Structure::RowEvaluable(RowExtent::Lower);
    let op = match kind {
        DualMatrixKind::EAlphaInt | DualMatrixKind::FAlphaD => {
            TriangleOperator::from_rows(structure, move |n| {
                let scale = index_factor::<T>(space, n) * a2.get(n);
                let mut row: Vec<T> = (1..n)
                    .map(|k| scale.clone() * wp2.inverse_difference(k))
                    .collect();
                row.push(scale / (wp2.u(n) * wp2.w(n)));
                row
            })
        }
        DualMatrixKind::HBetaInt | DualMatrixKind::HBetaD => {
            TriangleOperator::from_rows(structure, move |n| pairing_row(space, &wp2, |k| a2.get(k), n))
        }
    };
    op.with_guard(wp.guard()).with_guards(a.guards())
}

/// `(sup over n of sum_{k<=n} |h_nk|)` up to each schedule size.
fn row_sum_trace<T: Scalar>(
    op: &TriangleOperator<T>,
    sched: &TruncationSchedule,
) -> Result<(Vec<TracePoint>, usize)> {
    op.check(sched.max())?;
    let (mut best, mut arg) = (T::zero(), 1);
    let mut trace = Vec::new();
    let mut sizes = sched.sizes().iter().peekable();
    for n in 1..=sched.max() {
        let s = op.row(n).iter().fold(T::zero(), |acc, v| acc + v.abs());
        if s > best {
            best = s;
            arg = n;
        }
        if sizes.peek() == Some(&&n) {
            trace.push(TracePoint::of(n, &best));
            sizes.next();
        }
    }
    Ok((trace, arg))
}

/// `sup_{k<=N} sum_{n<=N} |e_nk|` at each schedule size.
fn column_sum_trace<T: Scalar>(
    op: &TriangleOperator<T>,
    sched: &TruncationSchedule,
) -> Result<(Vec<TracePoint>, usize)> {
    op.check(sched.max())?;
    let mut cols = vec![T::zero(); sched.max()];
    let mut trace = Vec::new();
    let mut arg = 1;
    let mut sizes = sched.sizes().iter().peekable();
    for n in 1..=sched.max() {
        for (c, v) in cols.iter_mut().zip(op.row(n).iter()) {
            *c += v.abs();
        }
        if sizes.peek() == Some(&&n) {
            let (mut best, mut at) = (T::zero(), 1);
            for (k, c) in cols[..n].iter().enumerate() {
                if *c > best {
                    best = c.clone();
                    at = k + 1;
                }
            }
            trace.push(TracePoint::of(n, &best));
            arg = at;
            sizes.next();
        }
    }
    Ok((trace, arg))
}

/// Evidence that `a` lies in the α-dual of the domain: the column statistic of
/// E (or F) must stay bounded. The subset-family form of the same condition,
/// over the first [`SUBSET_ROWS`] rows, is recorded as a cross-check.
pub fn alpha_dual_check<T: Scalar>(
    space: DomainName,
    a: &LazySequence<T>,
    wp: &WeightPair<T>,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    let e = build_dual_matrix(DualMatrixKind::alpha(space), a, wp);
    let (trace, arg) = column_sum_trace(&e, sched)?;
    let mut v = ConditionVerdict::from_trace(StatKind::Bounded, trace, sched)
        .with_witness(Some(Witness::Index(arg)));
    let r = SUBSET_ROWS.min(sched.max());
    let rows: Vec<Vec<f64>> = (1..=r)
        .map(|n| e.row(n).iter().map(Scalar::to_f64).collect())
        .collect();
    let (sub, _) = subset_sup(&rows);
    v.cross_checks.push(CrossCheck {
        label: format!("subset family over rows 1..{r}"),
        trace: vec![TracePoint { size: r, value: sub, exact: None }],
    });
    Ok(v)
}

fn h_statistic<T: Scalar>(
    space: DomainName,
    a: &LazySequence<T>,
    wp: &WeightPair<T>,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    let h = build_dual_matrix(DualMatrixKind::beta(space), a, wp);
    let (trace, arg) = row_sum_trace(&h, sched)?;
    let mut v = ConditionVerdict::from_trace(StatKind::Bounded, trace, sched)
        .with_witness(Some(Witness::Index(arg)));
    v.notes.push(
        "H is lower triangular; every column k <= n carries the diagonal-type term and the tail sum"
            .into(),
    );
    Ok(v)
}

/// Evidence for the β-dual: the H row-sum statistic stays bounded and `a` is a
/// convergent series.
pub fn beta_dual_check<T: Scalar>(
    space: DomainName,
    a: &LazySequence<T>,
    wp: &WeightPair<T>,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    let d = h_statistic(space, a, wp, sched)?;
    let cs = space_evidence(a, SpaceTag::Cs, sched)?;
    let dual = if space == DomainName::IntBv { "d3" } else { "d4" };
    Ok(ConditionVerdict::conjunction(vec![
        NamedVerdict { name: dual.into(), verdict: d },
        NamedVerdict { name: "cs".into(), verdict: cs },
    ]))
}

/// Evidence for the γ-dual: the H row-sum statistic alone.
pub fn gamma_dual_check<T: Scalar>(
    space: DomainName,
    a: &LazySequence<T>,
    wp: &WeightPair<T>,
    sched: &TruncationSchedule,
) -> Result<ConditionVerdict> {
    h_statistic(space, a, wp, sched)
}

/// `(sum_{k<=n} a_k x_k, (Hy)_n)` with `x` the closed-form preimage of `y`;
/// the two are computed independently and agree exactly.
pub fn pairing_identity_check<T: Scalar>(
    a: &LazySequence<T>,
    y: &LazySequence<T>,
    wp: &WeightPair<T>,
    space: DomainName,
    n: usize,
) -> Result<(T, T)> {
    wp.ensure(n)?;
    let x = space.inverse(wp, y).try_take(n)?;
    let av = a.try_take(n)?;
    let lhs = av
        .iter()
        .zip(&x)
        .fold(T::zero(), |acc, (ak, xk)| acc + ak.clone() * xk.clone());
    let h = build_dual_matrix(DualMatrixKind::beta(space), a, wp);
    let ys = y.try_take(n)?;
    let rhs = h
        .try_row(n)?
        .iter()
        .zip(&ys)
        .fold(T::zero(), |acc, (hk, yk)| acc + hk.clone() * yk.clone());
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use num::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::evidence::Status;
    use crate::operators::apply_triangle;
    use crate::scalar::Exact;

    fn q(p: i64, r: i64) -> Exact {
        Exact::from_frac(p, r)
    }

    fn random_pair(rng: &mut ChaCha8Rng, len: usize) -> WeightPair<Exact> {
        let mut draw = |n| -> Vec<Exact> {
            (0..n).map(|_| q(rng.gen_range(1..=10), rng.gen_range(1..=10))).collect()
        };
        let u = draw(len);
        let w = draw(len + 1);
        WeightPair::new(LazySequence::from_vec(u), LazySequence::from_vec(w))
    }

    fn random_seq(rng: &mut ChaCha8Rng, len: usize) -> LazySequence<Exact> {
        LazySequence::from_vec(
            (0..len).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect(),
        )
    }

    #[test]
    fn unit_weights_collapse() {
        let ones = WeightPair::<Exact>::ones();
        let a = LazySequence::from_fn(|k| q(k as i64 * k as i64 - 3, 1));
        let e = build_dual_matrix(DualMatrixKind::EAlphaInt, &a, &ones);
        let h = build_dual_matrix(DualMatrixKind::HBetaInt, &a, &ones);
        for n in 1..10 {
            for k in 1..n {
                assert!(e.entry(n, k).is_zero());
                // the tail sums drop out, the per-column term a_k/k stays
                assert_eq!(h.entry(n, k), a.get(k) / Exact::from_usize(k));
            }
            assert_eq!(e.entry(n, n), a.get(n) / Exact::from_usize(n));
            assert_eq!(h.entry(n, n), a.get(n) / Exact::from_usize(n));
            assert!(h.entry(n, n + 1).is_zero());
        }
        let f = build_dual_matrix(DualMatrixKind::FAlphaD, &a, &ones);
        assert_eq!(f.entry(4, 4), a.get(4) * q(4, 1));
        assert!(f.entry(4, 2).is_zero());
    }

    #[test]
    fn hand_expanded_e_entries() {
        let wp = WeightPair::new(LazySequence::ones(), LazySequence::harmonic());
        let e = build_dual_matrix(DualMatrixKind::EAlphaInt, &LazySequence::<Exact>::ones(), &wp);
        // rows: (1), (-1/2, 1), (-1/3, -1/3, 1); w_k = 1/k so 1/w_k - 1/w_{k+1} = -1
        // and the diagonal is a_n / (n * 1/n) = 1
        let table = [vec![q(1, 1)], vec![q(-1, 2), q(1, 1)], vec![q(-1, 3), q(-1, 3), q(1, 1)]];
        for (n, row) in table.iter().enumerate() {
            assert_eq!(*e.row(n + 1), *row);
        }
    }

    #[test]
    fn h_by_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let wp = random_pair(&mut rng, 20);
        let a = random_seq(&mut rng, 20);
        for (kind, space) in [(DualMatrixKind::HBetaInt, DomainName::IntBv), (DualMatrixKind::HBetaD, DomainName::DBv)] {
            let h = build_dual_matrix(kind, &a, &wp);
            for n in 1..=12 {
                for k in 1..=n {
                    let c = |j: usize| index_factor::<Exact>(space, j);
                    let tail: Exact = (k + 1..=n).map(|j| c(j) * a.get(j)).fold(Exact::zero(), |a, b| a + b);
                    let direct = c(k) * a.get(k) / (wp.u(k) * wp.w(k))
                        + (Exact::from_int(1) / (wp.u(k) * wp.w(k))
                            - Exact::from_int(1) / (wp.u(k) * wp.w(k + 1)))
                            * tail;
                    assert_eq!(h.entry(n, k), direct);
                }
            }
        }
    }

    #[test]
    fn e_reproduces_coordinate_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for space in [DomainName::IntBv, DomainName::DBv] {
            let wp = random_pair(&mut rng, 70);
            let (a, y) = (random_seq(&mut rng, 64), random_seq(&mut rng, 64));
            let x = space.inverse(&wp, &y);
            let ey = apply_triangle(&build_dual_matrix(DualMatrixKind::alpha(space), &a, &wp), &y).unwrap();
            for n in 1..=64 {
                assert_eq!(a.get(n) * x.get(n), ey.get(n));
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let ones = WeightPair::<Exact>::ones();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let (a, y) = (random_seq(&mut rng, 20), random_seq(&mut rng, 20));
        let (l, r) = pairing_identity_check(&a, &y, &ones, DomainName::IntBv, 15).unwrap();
        let direct: Exact = (1..=15).map(|k| a.get(k) * y.get(k) / Exact::from_usize(k)).fold(Exact::zero(), |a, b| a + b);
        assert_eq!((l.clone(), r), (direct.clone(), direct));

        let (l, r) = pairing_identity_check(&a, &LazySequence::zeros(), &ones, DomainName::DBv, 9).unwrap();
        assert!(l.is_zero() && r.is_zero());

        for space in [DomainName::IntBv, DomainName::DBv] {
            let wp = random_pair(&mut rng, 40);
            let (a, y) = (random_seq(&mut rng, 32), random_seq(&mut rng, 32));
            for n in [1usize, 2, 17, 32] {
                let (l, r) = pairing_identity_check(&a, &y, &wp, space, n).unwrap();
                assert_eq!(l, r, "{space} n={n}");
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let sched = TruncationSchedule::default();
        let ones = WeightPair::<Exact>::ones();
        let v = alpha_dual_check(DomainName::IntBv, &LazySequence::harmonic(), &ones, &sched).unwrap();
        assert_eq!(v.status, Status::HoldsAtTruncation);
        assert_eq!(v.final_value(), 1.0);
        assert_eq!(v.witness, Some(Witness::Index(1)));
        assert_eq!(v.cross_checks[0].trace[0].value, (1..=12).map(|n| 1.0 / (n * n) as f64).sum::<f64>());

        let v = alpha_dual_check(DomainName::IntBv, &LazySequence::power(2), &ones, &sched).unwrap();
        assert_eq!(v.status, Status::DivergenceEvidence);
        let vals: Vec<f64> = v.trace.iter().map(|p| p.value).collect();
        assert_eq!(vals, vec![16.0, 32.0, 64.0, 128.0, 256.0]);

        let v = alpha_dual_check(DomainName::DBv, &LazySequence::zeros(), &ones, &sched).unwrap();
        assert_eq!((v.status, v.final_value()), (Status::HoldsAtTruncation, 0.0));
    }

    #[test]
    fn beta_and_gamma_examples() {
        let sched = TruncationSchedule::default();
        let ones = WeightPair::<f64>::ones();
        let sq = LazySequence::power(-2);
        for check in [beta_dual_check::<f64>, gamma_dual_check::<f64>] {
            let v = check(DomainName::IntBv, &sq, &ones, &sched).unwrap();
            assert_eq!(v.status, Status::HoldsAtTruncation);
            let v = check(DomainName::IntBv, &LazySequence::zeros(), &ones, &sched).unwrap();
            assert_eq!(v.status, Status::HoldsAtTruncation);
        }
        let v = beta_dual_check(DomainName::IntBv, &LazySequence::ones(), &ones, &sched).unwrap();
        assert_eq!(v.status, Status::DivergenceEvidence);
        let v = gamma_dual_check(DomainName::IntBv, &LazySequence::alternating(), &ones, &sched).unwrap();
        assert_eq!(v.status, Status::DivergenceEvidence);
        // the d3 statistic is sum_k k^-3
        let v = gamma_dual_check(DomainName::IntBv, &sq, &ones, &sched).unwrap();
        let oracle: f64 = (1..=256).map(|k| (k as f64).powi(-3)).sum();
        assert!((v.final_value() - oracle).abs() < 1e-13);
    }

    #[test]
    fn scaling_keeps_status() {
        let sched = TruncationSchedule::default();
        let ones = WeightPair::<f64>::ones();
        for a in [LazySequence::power(-2), LazySequence::ones(), LazySequence::harmonic()] {
            let c = -7.0 / 3.0;
            let scaled = a.scale(c);
            for space in [DomainName::IntBv, DomainName::DBv] {
                let pairs = [
                    (alpha_dual_check(space, &a, &ones, &sched), alpha_dual_check(space, &scaled, &ones, &sched)),
                    (gamma_dual_check(space, &a, &ones, &sched), gamma_dual_check(space, &scaled, &ones, &sched)),
                    (beta_dual_check(space, &a, &ones, &sched), beta_dual_check(space, &scaled, &ones, &sched)),
                ];
                for (v, w) in pairs {
                    let (v, w) = (v.unwrap(), w.unwrap());
                    assert_eq!(v.status, w.status);
                    for (p, r) in v.trace.iter().zip(&w.trace) {
                        assert!((r.value - 7.0 / 3.0 * p.value).abs() <= 1e-12 * r.value.abs());
                    }
                }
            }
        }
    }
}
