//! Matrix-class characterization.
//!
//! A class `(X:Y)` is reduced to a recipe: an optional transform of the matrix
//! followed by a battery of conditions on the result. Tables 1 and 2 cover the
//! classical pairs with ℓ₁ on one side; tables 3 and 4 take the source to be
//! `∫bv(u,w)` or `d(bv(u,w))` (via `ā`, `ã`), tables 5 and 6 the target (via
//! `b̄ = Γ·A`, `b̃ = Σ·A`).

mod conditions;
mod transforms;

use std::fmt;

use serde::{Serialize, Serializer};

pub use conditions::{check_condition, check_condition_spec, ConditionId, ConditionSpec, SUBSET_ROWS};
pub use transforms::{transform_abar, transform_atilde, transform_bbar, transform_btilde, TransformTag};

use crate::duals::beta_dual_check;
use crate::error::{Error, Result};
use crate::evidence::{ConditionVerdict, NamedVerdict, Status, TruncationSchedule};
use crate::operators::{classical_matrix, compose, ClassicalKind, DomainName, TriangleOperator, WeightPair};
use crate::scalar::Scalar;
use crate::seq::{LazySequence, SpaceTag};

/// A classical space or one of the two domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceRef {
    Classical(SpaceTag),
    Domain(DomainName),
}

impl SpaceRef {
    pub fn parse(s: &str) -> Option<Self> {
        SpaceTag::parse(s)
            .map(SpaceRef::Classical)
            .or_else(|| DomainName::parse(s).map(SpaceRef::Domain))
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceRef::Classical(t) => t.name(),
            SpaceRef::Domain(d) => d.name(),
        }
    }
}

impl fmt::Display for SpaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SpaceRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl From<SpaceTag> for SpaceRef {
    fn from(t: SpaceTag) -> Self {
        SpaceRef::Classical(t)
    }
}

impl From<DomainName> for SpaceRef {
    fn from(d: DomainName) -> Self {
        SpaceRef::Domain(d)
    }
}

/// What to run for one `(source, target)` pair of a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recipe {
    pub table: u8,
    /// Entry label within the table: `"2"`, `"3a"`, `"8b"`, ...
    pub label: String,
    pub transform: TransformTag,
    pub conditions: Vec<ConditionSpec>,
}

use ConditionId::*;

const fn c(id: ConditionId) -> ConditionSpec {
    ConditionSpec::plain(id)
}

/// Conditions for `(ℓ₁ : Y)`, shared by tables 1, 3 and 4. Tables 3 and 4 add
/// `c0` (column limits zero); table 1 has no `c0` entry.
fn l1_source(target: SpaceTag, with_c0: bool) -> Option<(u8, Vec<ConditionSpec>)> {
    Some(match target {
        SpaceTag::Linf => (1, vec![c(C11)]),
        SpaceTag::C => (2, vec![c(C11), c(C12)]),
        SpaceTag::C0 if with_c0 => (3, vec![c(C11), ConditionSpec::zero_limit(C12)]),
        SpaceTag::L1 if !with_c0 => (3, vec![c(C13)]),
        SpaceTag::Bs => (4, vec![c(C14)]),
        SpaceTag::Cs => (5, vec![c(C14), c(C15)]),
        SpaceTag::C0s => (6, vec![c(C14), c(C16)]),
        _ => return None,
    })
}

/// Conditions for `(X : ℓ₁)`, shared by tables 2, 5 and 6.
fn l1_target(source: SpaceTag) -> Option<(u8, Vec<ConditionSpec>)> {
    Some(match source {
        SpaceTag::Linf | SpaceTag::C | SpaceTag::C0 => (7, vec![c(C20)]),
        SpaceTag::Bs => (8, vec![c(C21), c(C22)]),
        SpaceTag::Cs => (9, vec![c(C23)]),
        SpaceTag::C0s => (10, vec![c(C22)]),
        SpaceTag::L1 => return None,
    })
}

/// The table that covers `(source, target)`, if any.
pub fn resolve_table(source: SpaceRef, target: SpaceRef) -> Option<u8> {
    use SpaceRef::*;
    match (source, target) {
        (Classical(SpaceTag::L1), Classical(_)) => Some(1),
        (Classical(_), Classical(SpaceTag::L1)) => Some(2),
        (Domain(DomainName::IntBv), Classical(_)) => Some(3),
        (Domain(DomainName::DBv), Classical(_)) => Some(4),
        (Classical(_), Domain(DomainName::IntBv)) => Some(5),
        (Classical(_), Domain(DomainName::DBv)) => Some(6),
        _ => None,
    }
}

pub fn table_recipe(table: u8, source: SpaceRef, target: SpaceRef) -> Result<Recipe> {
    use SpaceRef::*;
    let unsupported = || Error::UnsupportedClass {
        table,
        source_space: source.name().into(),
        target: target.name().into(),
    };
    let (transform, suffix, found) = match (table, source, target) {
        (1, Classical(SpaceTag::L1), Classical(t)) => (TransformTag::None, "", l1_source(t, false)),
        (2, Classical(s), Classical(SpaceTag::L1)) => (TransformTag::None, "", l1_target(s)),
        (3, Domain(DomainName::IntBv), Classical(t)) => (TransformTag::Abar, "a", l1_source(t, true)),
        (4, Domain(DomainName::DBv), Classical(t)) => (TransformTag::Atilde, "b", l1_source(t, true)),
        (5, Classical(s), Domain(DomainName::IntBv)) => (TransformTag::Bbar, "a", l1_target(s)),
        (6, Classical(s), Domain(DomainName::DBv)) => (TransformTag::Btilde, "b", l1_target(s)),
        _ => return Err(unsupported()),
    };
    let (entry, conditions) = found.ok_or_else(unsupported)?;
    Ok(Recipe {
        table,
        label: format!("{entry}{suffix}"),
        transform,
        conditions,
    })
}

/// A classical summability matrix multiplied onto `A` from the left before
/// the recipe runs, for targets that are domains of that matrix in ℓ∞.
#[derive(Clone)]
pub struct Composite<T> {
    pub kind: ClassicalKind<T>,
    /// Column cut for matrices with infinite rows (Taylor).
    pub row_bound: Option<usize>,
}

impl<T: Scalar> fmt::Debug for Composite<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Composite")
            .field("kind", &self.kind)
            .field("row_bound", &self.row_bound)
            .finish()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionResult {
    pub id: ConditionId,
    pub label: String,
    pub description: &'static str,
    pub verdict: ConditionVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub source: SpaceRef,
    pub target: SpaceRef,
    pub table: u8,
    pub label: String,
    pub transform: TransformTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composite: Option<String>,
    pub conditions: Vec<ConditionResult>,
    /// Each of the first rows of `A` in the β-dual of the source domain.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prerequisite: Option<ConditionVerdict>,
    pub overall: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn characterize<T: Scalar>(
    a: &TriangleOperator<T>,
    source: SpaceRef,
    target: SpaceRef,
    wp: &WeightPair<T>,
    sched: &TruncationSchedule,
) -> Result<ClassReport> {
    characterize_with(a, source, target, None, None, wp, sched)
}

/// [`characterize`] with an explicit table and an optional left composite.
pub fn characterize_with<T: Scalar>(
    a: &TriangleOperator<T>,
    source: SpaceRef,
    target: SpaceRef,
    table: Option<u8>,
    composite: Option<&Composite<T>>,
    wp: &WeightPair<T>,
    sched: &TruncationSchedule,
) -> Result<ClassReport> {
    let table = match table {
        Some(t) => t,
        None => resolve_table(source, target).ok_or_else(|| Error::UnsupportedClass {
            table: 0,
            source_space: source.name().into(),
            target: target.name().into(),
        })?,
    };
    let recipe = table_recipe(table, source, target)?;
    let mut notes = Vec::new();

    let (matrix, composite_label) = match composite {
        None => (a.clone(), None),
        Some(comp) => {
            if matches!(target, SpaceRef::Domain(_)) {
                return Err(Error::InvalidArgument(
                    "a left composite needs a classical target space".into(),
                ));
            }
            let left = classical_matrix(&comp.kind)?;
            let product = compose(&left, a, comp.row_bound)?;
            if let Some(bound) = comp.row_bound {
                if let Some(mass) = left.row_tail_mass(sched.max(), bound) {
                    notes.push(format!(
                        "{} rows cut at column {bound}; row {} leaves tail mass {mass:.3e}",
                        comp.kind.label(),
                        sched.max()
                    ));
                }
            }
            (product, Some(comp.kind.label()))
        }
    };

    let transformed = recipe.transform.apply(&matrix, wp)?;
    if matches!(recipe.transform, TransformTag::Abar | TransformTag::Atilde) {
        notes.push(format!(
            "{} is the matrix of summands; absolute values and sups are taken by the conditions",
            recipe.transform
        ));
    }

    let prerequisite = match source {
        SpaceRef::Domain(space) => {
            let rows = sched.first();
            let mut parts = Vec::with_capacity(rows);
            for n in 1..=rows {
                let row: LazySequence<T> = matrix.row_sequence(n);
                parts.push(NamedVerdict {
                    name: format!("row {n}"),
                    verdict: beta_dual_check(space, &row, wp, sched)?,
                });
            }
            Some(ConditionVerdict::conjunction(parts))
        }
        SpaceRef::Classical(_) => None,
    };

    let mut conditions = Vec::with_capacity(recipe.conditions.len());
    for spec in &recipe.conditions {
        conditions.push(ConditionResult {
            id: spec.id,
            label: spec.label(),
            description: spec.id.describe(),
            verdict: check_condition_spec(*spec, &transformed, sched)?,
        });
    }
    let overall = Status::all(
        conditions
            .iter()
            .map(|c| c.verdict.status)
            .chain(prerequisite.iter().map(|p| p.status)),
    );
    Ok(ClassReport {
        source,
        target,
        table,
        label: recipe.label,
        transform: recipe.transform,
        composite: composite_label,
        conditions,
        prerequisite,
        overall,
        notes,
    })
}

/// `((Ax)_n, (By)_n)` for `A = B·T` with T the triangle of `space` and `x` the
/// preimage of `y`. `B` must have finite rows. The entries of `A` are summed
/// directly, `a_nk = sum_{j>=k} b_nj t_jk`, without going through `compose`.
pub fn reduction_roundtrip<T: Scalar>(
    space: DomainName,
    b: &TriangleOperator<T>,
    wp: &WeightPair<T>,
    y: &LazySequence<T>,
    n: usize,
) -> Result<(T, T)> {
    let brow = b.try_row(n)?;
    let len = brow.len();
    wp.ensure(len)?;
    let t = space.triangle(wp);
    let x = space.inverse(wp, y).try_take(len)?;
    let ys = y.try_take(len)?;
    let mut ax = T::zero();
    for k in 1..=len {
        let mut a_nk = T::zero();
        for j in k..=len {
            a_nk += brow[j - 1].clone() * t.entry(j, k);
        }
        ax += a_nk * x[k - 1].clone();
    }
    let by = brow
        .iter()
        .zip(&ys)
        .fold(T::zero(), |acc, (bj, yj)| acc + bj.clone() * yj.clone());
    Ok((ax, by))
}

/// [`reduction_roundtrip`] for `∫bv(u,w)`.
pub fn verify_reduction_roundtrip<T: Scalar>(
    b: &TriangleOperator<T>,
    wp: &WeightPair<T>,
    y: &LazySequence<T>,
    n: usize,
) -> Result<(T, T)> {
    reduction_roundtrip(DomainName::IntBv, b, wp, y, n)
}

/// Tables and their labelled entries, for listing.
pub fn all_recipes() -> Vec<(SpaceRef, SpaceRef, Recipe)> {
    let mut out = Vec::new();
    let classical = SpaceTag::ALL.map(SpaceRef::Classical);
    let domains = [SpaceRef::Domain(DomainName::IntBv), SpaceRef::Domain(DomainName::DBv)];
    for table in 1..=6u8 {
        for s in classical.iter().chain(&domains) {
            for t in classical.iter().chain(&domains) {
                if let Ok(r) = table_recipe(table, *s, *t) {
                    out.push((*s, *t, r));
                }
            }
        }
    }
    out
}
