//! Exact and truncation-scale computation with the weighted-mean integrated and
//! differentiated sequence spaces `∫bv(u,w) = (ℓ₁)_Γ` and `d(bv(u,w)) = (ℓ₁)_Σ`.
//!
//! * [`seq`] and [`evidence`]: lazy sequences and three-valued evidence for
//!   membership in the classical spaces.
//! * [`operators`]: weighted-mean triangles Γ and Σ, their inverses, basis
//!   columns and the classical summability matrices.
//! * [`spaces`]: norms, the isomorphisms onto ℓ₁, the AK tail.
//! * [`duals`]: α, β and γ duals.
//! * [`classes`]: matrix-class characterization by condition batteries.

pub mod classes;
pub mod duals;
pub mod error;
pub mod evidence;
pub mod operators;
pub mod scalar;
pub mod seq;
pub mod spaces;

pub use error::{Error, Result};
pub use evidence::{ConditionVerdict, Status, TruncationSchedule};
pub use scalar::{Exact, Scalar};
pub use seq::{partial_sum, LazySequence, SpaceTag};
