//! Weighted-mean triangles, their inverses and basis columns, and the
//! classical summability matrices.

mod classical;
mod triangle;
mod weighted;
mod weights;

pub use classical::{classical_matrix, ClassicalKind};
pub use triangle::{
    apply_row_truncated, apply_triangle, compose, RowExtent, Structure, StructuralKind,
    TriangleOperator, TruncatedApply,
};
pub use weighted::{
    basis_column, basis_cross_check, basis_entry_as_printed, basis_entry_closed_form,
    gamma_inverse_closed_form, invert_triangle_oracle, make_gamma, make_sigma,
    make_weighted_mean, sigma_inverse_closed_form, BasisCrossCheck, DomainName,
};
pub use weights::WeightPair;
