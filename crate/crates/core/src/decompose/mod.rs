//! Constructive decompositions: outer rings and perpendicular arrays,
//! augmented asdim matrices, the union bound, disjoint refinement and
//! product splits. Every construction is re-verified by an independent
//! checker that records its verdicts in a [`DecompositionReport`].

mod asdim;
mod product;
mod refine;
mod report;
mod rings;
mod union;

pub use asdim::{asdim_matrix, verify_asdim_matrix, AugmentedMatrix};
pub use product::{
    cross_dim0, product_split, truncated_product_decomposition, CrossCertificate, ProductSplit,
    TruncatedProduct,
};
pub use refine::{check_refinement, refine_disjoint, Refinement};
pub use report::{DecompositionReport, Part};
pub use rings::{check_perp, outer_ring, perp_array, perp_levels, perp_split, PerpSplit};
pub use union::{check_union_bound, corrected_union_bound, union_bound, UnionBoundCheck};

use crate::error::DecompositionError;

fn check_scale(r: f64) -> Result<(), DecompositionError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(DecompositionError::BadScale(alloc::format!("{r}")))
    }
}
