//! Decompositions of products: ×-dot products of disjoint arrays, the split
//! `𝒵 = (ℳᵀ ·× 𝒴ᵀ)ᵀ` of `X × Y`, and truncated products of discrete factors.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::asdim::{asdim_matrix, column_labels, AugmentedMatrix};
use super::check_scale;
use super::refine::{refine_disjoint, Refinement};
use super::report::DecompositionReport;
use crate::algebra::{IndexSet, SubsetArray, SubsetMatrix};
use crate::bricks::coarse_cover;
use crate::disjoint::array_scale_disjoint;
use crate::error::{AlgebraError, DecompositionError};
use crate::ext::ExtReal;
use crate::product::is_c_discrete;
use crate::scale::{Dim0Certificate, ScaleGraph};
use crate::space::{FiniteMetricSpace, Norm};
use crate::subset::Subset;

/// Predicted and measured bounds for an `𝒜 ·× ℬ` product set.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossCertificate {
    pub set: Subset,
    /// Largest combined bound `bound(𝒜(t)) ⊕ bound(ℬ(t))` over indices with
    /// both entries nonempty, `⊕` being the product norm.
    pub predicted: ExtReal,
    pub measured: Dim0Certificate,
}

impl CrossCertificate {
    pub fn holds(&self) -> bool {
        self.measured.bound <= self.predicted
    }
}

fn first_touching(graph: &ScaleGraph<'_>, a: &SubsetArray) -> Option<(usize, usize)> {
    let balls = a.ball(graph);
    let e = balls.entries();
    (0..e.len())
        .flat_map(|i| (i + 1..e.len()).map(move |j| (i, j)))
        .find(|&(i, j)| e[i].intersects(&e[j]))
}

fn factors(product: &FiniteMetricSpace) -> Result<(&FiniteMetricSpace, &FiniteMetricSpace, Norm), DecompositionError> {
    product
        .product_factors()
        .ok_or(DecompositionError::Algebra(AlgebraError::NotAProduct))
}

fn combined_bound(a: &[ExtReal], b: &[ExtReal], live: impl Fn(usize) -> bool, norm: Norm) -> ExtReal {
    (0..a.len())
        .filter(|&t| live(t))
        .map(|t| norm.combine(a[t], b[t]))
        .max()
        .unwrap_or(ExtReal::ZERO)
}

/// Certificate for `𝒜 ·× ℬ` at scale `r`, `𝒜` in the left factor and
/// scale-r-disjoint.
///
/// A chain in the product projects to chains in each factor, so it stays in
/// one `𝒜(t) × ℬ(t)` and inside one r-component of each entry.
pub fn cross_dim0(
    product: &FiniteMetricSpace,
    a: &SubsetArray,
    b: &SubsetArray,
    r: f64,
) -> Result<CrossCertificate, DecompositionError> {
    check_scale(r)?;
    let (left, right, norm) = factors(product)?;
    let gl = ScaleGraph::new(left, r);
    if let Some((first, second)) = first_touching(&gl, a) {
        return Err(DecompositionError::NotScaleDisjoint {
            scale: format!("{r}"),
            first,
            second,
        });
    }
    let gr = ScaleGraph::new(right, r);
    let set = a.cross_dot(b, product)?;
    let ab: Vec<ExtReal> = a.entries().iter().map(|e| gl.components_norm(e)).collect();
    let bb: Vec<ExtReal> = b.entries().iter().map(|e| gr.components_norm(e)).collect();
    let live = |t: usize| !a.get(t).is_empty() && !b.get(t).is_empty();
    let predicted = combined_bound(&ab, &bb, live, norm);
    let measured = ScaleGraph::new(product, r).certificate(&set);
    Ok(CrossCertificate {
        set,
        predicted,
        measured,
    })
}

/// `𝒵 = (ℳᵀ ·× 𝒴ᵀ)ᵀ` with its verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSplit {
    /// Indexed like the columns of `ℳ`: `b, a1, …, an`.
    pub z: SubsetArray,
    pub report: DecompositionReport,
}

/// Splits `X × Y` along an augmented matrix of `X` (scale `r`, `p` rows) and
/// a scale-r-disjoint array `Y₁, …, Y_p` of `Y` (scale `s`).
///
/// `Z(j) = ⋃ᵢ ℳ(i, j) × Yᵢ`. The report checks the cover both directly and
/// through the row covers of `ℳ`, bounds `Z(b)` at scale `r` by the ×-dot
/// argument with `𝒴` as the disjoint side, and records the scale-s bound of
/// every `Z(aj)`. The latter is only a verdict when column `aj` is
/// scale-s-disjoint, which is what the ×-dot argument needs.
pub fn product_split(
    product: &FiniteMetricSpace,
    mx: &AugmentedMatrix,
    yparts: &SubsetArray,
    s: f64,
) -> Result<ProductSplit, DecompositionError> {
    let r = mx.scale;
    check_scale(r)?;
    check_scale(s)?;
    let (x, y, norm) = factors(product)?;
    let (p, w) = mx.matrix.shape();
    if p != yparts.len() {
        return Err(DecompositionError::ShapeMismatch {
            rows: p,
            parts: yparts.len(),
        });
    }
    if mx.matrix.universe() != x.len() || yparts.universe() != y.len() {
        return Err(AlgebraError::NotAProduct.into());
    }
    let ycol = SubsetMatrix::new(
        y.len(),
        mx.matrix.rows().clone(),
        IndexSet::range(1),
        yparts.entries().to_vec(),
    )?;
    let zcol = mx.matrix.transpose().matmul_cross(&ycol, product)?;
    let z = SubsetArray::new(product.len(), mx.matrix.cols().clone(), zcol.column(0).into_entries())?;

    let mut report = DecompositionReport::new();
    report.scale("r", r).scale("s", s);
    report.verdict("product.cover", z.is_cover());
    report.verdict(
        "product.cover_via_rows",
        mx.matrix.rows_cover() && yparts.is_cover(),
    );
    let gy_r = ScaleGraph::new(y, r);
    report.verdict("product.y_disjoint", array_scale_disjoint(&gy_r, yparts));

    let gx_r = ScaleGraph::new(x, r);
    let gy_s = ScaleGraph::new(y, s);
    let gx_s = ScaleGraph::new(x, s);
    let yb_r: Vec<ExtReal> = yparts.entries().iter().map(|e| gy_r.components_norm(e)).collect();
    let yb_s: Vec<ExtReal> = yparts.entries().iter().map(|e| gy_s.components_norm(e)).collect();
    let at_r = ScaleGraph::new(product, r);
    let at_s = ScaleGraph::new(product, s);
    let mut finite = true;
    for j in 0..w {
        let label = &mx.matrix.cols().labels()[j];
        let col = mx.matrix.column(j);
        let zj = z.get(j);
        let live = |t: usize| !col.get(t).is_empty() && !yparts.get(t).is_empty();
        if j == 0 {
            let xb: Vec<ExtReal> = col.entries().iter().map(|e| gx_r.components_norm(e)).collect();
            let predicted = combined_bound(&xb, &yb_r, live, norm);
            let measured = at_r.components_norm(zj);
            finite &= measured.is_finite();
            report.verdict("product.z0_bound", measured <= predicted);
            report.measure(format!("z[{label}]@r"), measured);
            report.measure(format!("z[{label}]@r.predicted"), predicted);
            report.part(format!("z[{label}]"), zj.clone(), Some(at_r.certificate(zj)));
        } else {
            let measured = at_s.components_norm(zj);
            finite &= measured.is_finite();
            report.measure(format!("z[{label}]@s"), measured);
            if array_scale_disjoint(&gx_s, &col) {
                let xb: Vec<ExtReal> =
                    col.entries().iter().map(|e| gx_s.components_norm(e)).collect();
                let predicted = combined_bound(&xb, &yb_s, live, norm);
                report.verdict(format!("product.z{j}_bound"), measured <= predicted);
                report.measure(format!("z[{label}]@s.predicted"), predicted);
            }
            report.part(format!("z[{label}]"), zj.clone(), Some(at_s.certificate(zj)));
        }
    }
    report.verdict("product.finite", finite);
    Ok(ProductSplit { z, report })
}

/// Result of [`truncated_product_decomposition`].
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedProduct {
    /// `head × tail`.
    pub space: FiniteMetricSpace,
    /// Number of factors in the head.
    pub head_len: usize,
    pub matrix: AugmentedMatrix,
    pub tail_parts: Refinement,
    pub z0: Subset,
    /// The `Z(aj)` entries, whose union is `Z₁`.
    pub z1_parts: Vec<Subset>,
    pub report: DecompositionReport,
}

/// Decomposes `∏_{i ≤ truncation} Xᵢ` into `Z₀` of scale-k-dimension 0 and
/// `Z₁` split into scale-s-dimension 0 pieces, where `Xᵢ` must be
/// `2i`-discrete.
///
/// The factors beyond `k` are pairwise more than `2k` apart in every
/// coordinate, so their product (the tail) is scale-k-discrete. The tail is
/// refined at `s`, giving `p` parts, and the head `∏_{i ≤ k} Xᵢ` gets an
/// augmented matrix with `p` rows at scale `k`. Without `head_radius` the head
/// is a single part, so `Z₀ = X` and `Z₁ = ∅`; with it the head is first cut by
/// a coarse cover of that radius at scale `(p+1)k`.
pub fn truncated_product_decomposition(
    factors: &[Arc<FiniteMetricSpace>],
    k: f64,
    s: f64,
    truncation: usize,
    norm: Norm,
    head_radius: Option<f64>,
) -> Result<TruncatedProduct, DecompositionError> {
    check_scale(k)?;
    check_scale(s)?;
    let used = &factors[..truncation.min(factors.len())];
    if used.is_empty() {
        return Err(DecompositionError::PartsDoNotCover(0));
    }
    for (i, f) in used.iter().enumerate() {
        let c = 2.0 * (i as f64 + 1.0);
        if !is_c_discrete(f, c) {
            return Err(DecompositionError::NotDiscrete {
                factor: i + 1,
                required: format!("{c}"),
            });
        }
    }
    let head_len = (crate::ext::floor_nonneg(k) as usize).clamp(1, used.len());
    let head = FiniteMetricSpace::product_of(&used[..head_len], norm);
    let tail = FiniteMetricSpace::product_of(&used[head_len..], norm);
    let tail_graph = ScaleGraph::new(&tail, k);
    let tail_full = Subset::full(tail.len());
    let tail_cert = tail_graph.certificate(&tail_full);
    let tail_parts = refine_disjoint(&tail, &tail_full, tail_cert, s)?;
    let p = tail_parts.len();

    let head_cover = match head_radius {
        None => alloc::vec![Subset::full(head.len())],
        Some(radius) => {
            let g = ScaleGraph::new(&head, (p as f64 + 1.0) * k);
            coarse_cover(&g, &Subset::full(head.len()), radius)
        }
    };
    let head_parts = SubsetArray::from_entries(head.len(), head_cover)?;
    let matrix = asdim_matrix(&head, &head_parts, k, p)?;
    let space = FiniteMetricSpace::product(Arc::new(head), Arc::new(tail), norm);
    let split = product_split(&space, &matrix, &tail_parts.parts, s)?;

    let mut report = DecompositionReport::new();
    report.scale("k", k).scale("s", s).scale("truncation", truncation as f64);
    report.verdict("trunc.discrete", true);
    report.verdict("trunc.tail_dim0", tail_cert.bound == ExtReal::ZERO);
    report.absorb("split", &split.report);
    let z0 = split.z.get(0).clone();
    let z1_parts: Vec<Subset> = split.z.entries()[1..].to_vec();
    let z0_bound = ScaleGraph::new(&space, k).components_norm(&z0);
    report.measure("z0@k", z0_bound);
    report.measure("tail@k", tail_cert.bound);
    report.verdict("trunc.z0_finite", z0_bound.is_finite());
    report.verdict(
        "trunc.piece_count",
        z1_parts.len() == matrix.n() && split.z.len() == column_labels(matrix.n()).len(),
    );
    report.parts = split.report.parts.clone();
    Ok(TruncatedProduct {
        space,
        head_len,
        matrix,
        tail_parts,
        z0,
        z1_parts,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bricks::{interval_bricks, IntervalLayout};
    use alloc::vec;

    #[test]
    fn cross_of_far_points() {
        let i10 = Arc::new(FiniteMetricSpace::interval(10));
        let p = FiniteMetricSpace::product(i10.clone(), i10, Norm::L1);
        let a = SubsetArray::from_entries(10, vec![Subset::singleton(10, 0), Subset::singleton(10, 9)]).unwrap();
        let b = SubsetArray::from_entries(
            10,
            vec![Subset::from_indices(10, [0, 1]), Subset::from_indices(10, [8, 9])],
        )
        .unwrap();
        let c = cross_dim0(&p, &a, &b, 1.0).unwrap();
        assert_eq!(c.predicted, ExtReal::finite(1.0));
        assert!(c.holds());
        let none = SubsetArray::from_entries(10, vec![Subset::empty(10); 2]).unwrap();
        let c = cross_dim0(&p, &a, &none, 1.0).unwrap();
        assert_eq!((c.predicted, c.measured.bound), (ExtReal::ZERO, ExtReal::ZERO));
        let touching = SubsetArray::from_entries(10, vec![Subset::singleton(10, 0), Subset::singleton(10, 2)]).unwrap();
        assert!(cross_dim0(&p, &touching, &b, 1.0).is_err());
    }

    #[test]
    fn interval_times_clusters() {
        let x = FiniteMetricSpace::interval(64);
        let parent = FiniteMetricSpace::interval(64);
        let y = parent.subspace(&Subset::from_indices(64, [0, 1, 30, 31, 60, 61]));
        let cert = ScaleGraph::new(&y, 2.0).certificate(&Subset::full(6));
        let yparts = refine_disjoint(&y, &Subset::full(6), cert, 4.0).unwrap();
        let m = yparts.len();
        let parts = interval_bricks(64, IntervalLayout::for_scale(2.0, m));
        let parts = SubsetArray::from_entries(64, parts.to_vec()).unwrap();
        let mx = asdim_matrix(&x, &parts, 2.0, m).unwrap();
        let product = FiniteMetricSpace::product(Arc::new(x), Arc::new(y), Norm::L1);
        let split = product_split(&product, &mx, &yparts.parts, 4.0).unwrap();
        assert!(split.report.passed(), "{:?}", split.report.failures());
        assert_eq!(split.z.index().labels(), ["b", "a1"]);
    }

    #[test]
    fn truncated_scaled_intervals() {
        let factors: Vec<_> = (1..=3)
            .map(|i| Arc::new(FiniteMetricSpace::scaled_interval(8, 2.0 * i as f64)))
            .collect();
        let t = truncated_product_decomposition(&factors, 2.0, 8.0, 3, Norm::L1, None).unwrap();
        assert!(t.report.passed(), "{:?}", t.report.failures());
        assert_eq!(t.head_len, 2);
        assert!(t.z1_parts.is_empty());

        let bad = vec![Arc::new(FiniteMetricSpace::interval(4))];
        assert!(matches!(
            truncated_product_decomposition(&bad, 2.0, 8.0, 1, Norm::L1, None),
            Err(DecompositionError::NotDiscrete { factor: 1, .. })
        ));
    }
}
