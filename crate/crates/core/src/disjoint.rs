//! Scale-r-disjointness and r-orthogonality of arrays and matrices.

use crate::algebra::{SubsetArray, SubsetMatrix};
use crate::error::AlgebraError;
use crate::scale::ScaleGraph;
use crate::subset::Subset;

/// `B(C, r) ∩ B(D, r) = ∅`.
pub fn sets_scale_disjoint(graph: &ScaleGraph<'_>, c: &Subset, d: &Subset) -> bool {
    graph.scale_disjoint(c, d)
}

/// `B(𝒜, r)ᵀ ·∩ B(𝒜, r)` is diagonal.
pub fn array_scale_disjoint(graph: &ScaleGraph<'_>, a: &SubsetArray) -> bool {
    let balls = a.ball(graph);
    balls
        .as_column()
        .matmul_cap(&balls.as_row())
        .expect("a column and a row over one point always multiply")
        .is_diagonal()
}

/// `B(𝒜, r) ·∩ B(ℬ, r) = ∅`.
pub fn arrays_orthogonal(
    graph: &ScaleGraph<'_>,
    a: &SubsetArray,
    b: &SubsetArray,
) -> Result<bool, AlgebraError> {
    Ok(a.ball(graph).cap_dot(&b.ball(graph))?.is_empty())
}

/// The three equivalent forms of r-orthogonality of a matrix, each computed
/// on its own so that disagreement exposes a defect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orthogonality {
    /// Each column is scale-r-disjoint.
    pub columns_disjoint: bool,
    /// Rows are mutually r-orthogonal.
    pub rows_orthogonal: bool,
    /// `B(ℳ, r) ·∩ B(ℳᵀ, r)` is diagonal.
    pub gram_diagonal: bool,
}

impl Orthogonality {
    pub fn agree(&self) -> bool {
        self.columns_disjoint == self.rows_orthogonal && self.rows_orthogonal == self.gram_diagonal
    }

    pub fn holds(&self) -> bool {
        self.agree() && self.gram_diagonal
    }
}

pub fn matrix_orthogonal(graph: &ScaleGraph<'_>, m: &SubsetMatrix) -> Orthogonality {
    let (h, w) = m.shape();
    let columns_disjoint = (0..w).all(|j| array_scale_disjoint(graph, &m.column(j)));
    let rows: alloc::vec::Vec<SubsetArray> = (0..h).map(|i| m.row(i)).collect();
    let rows_orthogonal = (0..h).all(|i| {
        (0..h).all(|k| {
            i == k
                || arrays_orthogonal(graph, &rows[i], &rows[k])
                    .expect("rows of one matrix share an index")
        })
    });
    let gram_diagonal = m
        .ball(graph)
        .matmul_cap(&m.transpose().ball(graph))
        .expect("a matrix and its transpose always multiply")
        .is_diagonal();
    Orthogonality {
        columns_disjoint,
        rows_orthogonal,
        gram_diagonal,
    }
}
