//! Matrix algebra of subsets of finite ∞-pseudo-metric spaces and the
//! constructive decompositions built on it: scale-r-components with
//! quantitative certificates, orthogonal arrays, augmented asdim matrices,
//! disjoint refinements, product splits, APD profiles and weighted products.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod bricks;
pub mod decompose;
pub mod disjoint;
pub mod error;
pub mod ext;
pub mod product;
pub mod profile;
pub mod scale;
pub mod space;
pub mod subset;

pub use algebra::{IndexSet, SubsetArray, SubsetMatrix};
pub use error::{AlgebraError, DecompositionError, MetricError, ProductError, ProfileError};
pub use ext::ExtReal;
pub use scale::{ComponentsPartition, Dim0Certificate, ScaleGraph};
pub use space::{Edge, FiniteMetricSpace, Metric, Norm};
pub use subset::Subset;
