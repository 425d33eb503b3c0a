//! Outer rings of the chain pseudo-metric and the perpendicular array.

use alloc::format;
use alloc::vec::Vec;

use super::report::DecompositionReport;
use crate::algebra::SubsetArray;
use crate::disjoint::{array_scale_disjoint, arrays_orthogonal};
use crate::error::DecompositionError;
use crate::scale::ScaleGraph;
use crate::subset::Subset;

/// `k`-th outer ring `{x : d_s(x, A) = k + 1}` at the graph's scale `s`.
pub fn outer_ring(graph: &ScaleGraph<'_>, a: &Subset, k: u32) -> Subset {
    rings_at(graph, a, &[k + 1]).remove(0)
}

fn rings_at(graph: &ScaleGraph<'_>, a: &Subset, levels: &[u32]) -> Vec<Subset> {
    let n = graph.space().len();
    let dist = graph.levels_from(a);
    levels
        .iter()
        .map(|&l| Subset::from_indices(n, (0..n).filter(|&x| dist[x] == Some(l))))
        .collect()
}

/// Chain-distance levels `3i + 4` of the rings used for entries `0..count`.
pub fn perp_levels(count: usize) -> Vec<u32> {
    (0..count as u32).map(|i| 3 * i + 4).collect()
}

/// `𝒴^⊥`: entry `i` (for `0 ≤ i ≤ m`) is the outer ring of `Y` with
/// `k = 3i + 3`.
pub fn perp_array(graph: &ScaleGraph<'_>, y: &Subset, m: usize) -> SubsetArray {
    let rings = rings_at(graph, y, &perp_levels(m + 1));
    SubsetArray::from_entries(y.universe(), rings).expect("rings share the space")
}

/// `𝒵 ∪ array(Y) = (𝒵 ∩ 𝒴^⊥) ∪ outer`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerpSplit {
    pub inner: SubsetArray,
    pub outer: SubsetArray,
}

pub fn perp_split(
    y: &Subset,
    z: &SubsetArray,
    yperp: &SubsetArray,
) -> Result<PerpSplit, DecompositionError> {
    if z.len() != yperp.len() {
        return Err(DecompositionError::ShapeMismatch {
            rows: yperp.len(),
            parts: z.len(),
        });
    }
    let inner = SubsetArray::new(
        z.universe(),
        z.index().clone(),
        z.entries()
            .iter()
            .zip(yperp.entries())
            .map(|(zi, pi)| zi.intersection(pi))
            .collect(),
    )?;
    let outer = SubsetArray::new(
        z.universe(),
        z.index().clone(),
        z.entries()
            .iter()
            .zip(yperp.entries())
            .map(|(zi, pi)| y.union(zi).difference(pi))
            .collect(),
    )?;
    Ok(PerpSplit { inner, outer })
}

/// Checks the perpendicular array at scale `s` and the split at scale `r`.
pub fn check_perp(
    at_s: &ScaleGraph<'_>,
    at_r: &ScaleGraph<'_>,
    y: &Subset,
    z: &SubsetArray,
    yperp: &SubsetArray,
    split: &PerpSplit,
) -> Result<DecompositionReport, DecompositionError> {
    let mut report = DecompositionReport::new();
    report.scale("s", at_s.scale()).scale("r", at_r.scale());
    report.verdict("perp.diagonal", array_scale_disjoint(at_s, yperp));
    let constant = SubsetArray::constant(y, yperp.index().clone());
    report.verdict(
        "perp.orthogonal_to_y",
        arrays_orthogonal(at_s, yperp, &constant)?,
    );
    let lhs = split.inner.union(&split.outer)?;
    let rhs = z.union(&SubsetArray::constant(y, z.index().clone()))?;
    report.verdict("perp.union", lhs == rhs);
    report.verdict(
        "perp.outer_contains_y",
        SubsetArray::constant(y, z.index().clone()).leq(&split.outer)?,
    );
    let mut finite = true;
    for (i, o) in split.outer.entries().iter().enumerate() {
        let b = at_r.components_norm(o);
        finite &= b.is_finite();
        report.measure(format!("outer[{i}]"), b);
        report.part(format!("outer[{i}]"), o.clone(), Some(at_r.certificate(o)));
    }
    for (i, p) in yperp.entries().iter().enumerate() {
        report.measure(format!("perp[{i}]"), at_s.components_norm(p));
    }
    report.verdict("perp.outer_bounded", finite);
    Ok(report)
}
