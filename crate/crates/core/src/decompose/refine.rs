//! Refining a set of scale-r-dimension 0 into a scale-r-disjoint array whose
//! entries are of scale-s-dimension 0.

use alloc::format;
use alloc::vec::Vec;

use super::check_scale;
use super::report::DecompositionReport;
use crate::algebra::SubsetArray;
use crate::bricks::coarse_cover;
use crate::disjoint::array_scale_disjoint;
use crate::error::DecompositionError;
use crate::ext::ExtReal;
use crate::scale::{Dim0Certificate, ScaleGraph};
use crate::space::FiniteMetricSpace;
use crate::subset::Subset;

/// Output of [`refine_disjoint`] with the constants used along the way.
#[derive(Clone, Debug, PartialEq)]
pub struct Refinement {
    pub parts: SubsetArray,
    /// Certificates of the parts at scale `s`.
    pub certs: Vec<Dim0Certificate>,
    pub r: f64,
    pub s: f64,
    /// The claimed bound `M` of the input at scale `r`.
    pub m: ExtReal,
    /// `M + 2s + 2r`, the scale of the auxiliary cover.
    pub rho: f64,
    /// Largest scale-ρ bound among the auxiliary cover entries.
    pub cover_bound: ExtReal,
    /// `cover_bound + 2M`.
    pub predicted: ExtReal,
}

impl Refinement {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Splits `xset` (certified at `(r, M)`) into scale-r-disjoint parts of
/// scale-s-dimension 0.
///
/// An auxiliary cover `Y₀, …, Y_p` of `xset` at scale `ρ = M + 2s + 2r` is
/// taken from [`coarse_cover`]; `Zᵢ` collects the r-components of `xset`
/// meeting `Yᵢ`, and part `i` is `Zᵢ` minus the earlier `Z`s. Empty parts are
/// dropped. Each part is a union of whole r-components, hence the parts are
/// scale-r-disjoint.
///
/// Two r-components that are s-adjacent inside one part have representatives
/// in `Yᵢ` joined by a witness within `M + s ≤ ρ` of both, so they lie in one
/// ρ-component of `Yᵢ`. The s-components of a part therefore have diameter at
/// most `cover_bound + 2M`.
pub fn refine_disjoint(
    space: &FiniteMetricSpace,
    xset: &Subset,
    cert: Dim0Certificate,
    s: f64,
) -> Result<Refinement, DecompositionError> {
    let r = cert.scale;
    check_scale(r)?;
    check_scale(s)?;
    let at_r = ScaleGraph::new(space, r);
    let measured = at_r.components_norm(xset);
    let Some(m) = cert.bound.to_finite().filter(|_| measured <= cert.bound) else {
        return Err(DecompositionError::InvalidCertificate {
            measured: format!("{measured}"),
            claimed: format!("{}", cert.bound),
        });
    };
    let rho = m + 2.0 * s + 2.0 * r;
    let at_rho = ScaleGraph::new(space, rho);
    let cover = coarse_cover(&at_rho, xset, rho);
    let cover_bound = cover
        .iter()
        .map(|y| at_rho.components_norm(y))
        .max()
        .unwrap_or(ExtReal::ZERO);

    let classes = at_r.components(xset).classes;
    let mut taken = Subset::empty(space.len());
    let mut parts = Vec::new();
    for y in &cover {
        let mut z = Subset::empty(space.len());
        for c in classes.iter().filter(|c| c.intersects(y)) {
            z.union_with(c);
        }
        z.difference_with(&taken);
        taken.union_with(&z);
        if !z.is_empty() {
            parts.push(z);
        }
    }
    let at_s = ScaleGraph::new(space, s);
    let certs = parts.iter().map(|p| at_s.certificate(p)).collect();
    Ok(Refinement {
        parts: SubsetArray::from_entries(space.len(), parts)?,
        certs,
        r,
        s,
        m: cert.bound,
        rho,
        cover_bound,
        predicted: cover_bound + ExtReal::finite(2.0 * m),
    })
}

/// Re-checks a refinement: exact cover of `xset`, pairwise scale-r-disjoint
/// parts, and per-part scale-s bounds no larger than recorded or predicted.
pub fn check_refinement(
    space: &FiniteMetricSpace,
    xset: &Subset,
    refinement: &Refinement,
) -> DecompositionReport {
    let mut report = DecompositionReport::new();
    report
        .scale("r", refinement.r)
        .scale("s", refinement.s)
        .scale("rho", refinement.rho);
    let parts = &refinement.parts;
    report.verdict("refine.cover", parts.set_norm() == *xset);
    let at_r = ScaleGraph::new(space, refinement.r);
    report.verdict("refine.disjoint", array_scale_disjoint(&at_r, parts));
    let at_s = ScaleGraph::new(space, refinement.s);
    let mut bounded = refinement.certs.len() == parts.len();
    for (i, p) in parts.entries().iter().enumerate() {
        let measured = at_s.components_norm(p);
        let recorded = refinement.certs.get(i).map_or(ExtReal::ZERO, |c| c.bound);
        bounded &= measured <= recorded && measured <= refinement.predicted;
        report.measure(format!("part[{i}]"), measured);
        report.part(format!("part[{i}]"), p.clone(), Some(at_s.certificate(p)));
    }
    report.verdict("refine.bounds", bounded);
    report
        .measure("predicted", refinement.predicted)
        .measure("cover_bound", refinement.cover_bound)
        .measure("m", refinement.m);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clusters() -> (FiniteMetricSpace, Subset) {
        let i61 = FiniteMetricSpace::interval(61);
        let x = Subset::from_indices(61, [0, 1, 20, 21, 40, 41]);
        (i61, x)
    }

    #[test]
    fn clusters_refine() {
        let (i61, x) = clusters();
        let cert = Dim0Certificate { scale: 1.0, bound: ExtReal::finite(1.0) };
        let out = refine_disjoint(&i61, &x, cert, 5.0).unwrap();
        assert_eq!(out.rho, 13.0);
        assert!(out.len() >= 2);
        let report = check_refinement(&i61, &x, &out);
        assert!(report.passed(), "{:?}", report.failures());
    }

    #[test]
    fn one_component_stays_whole() {
        let i61 = FiniteMetricSpace::interval(61);
        let x = Subset::from_indices(61, 10..15);
        let cert = Dim0Certificate { scale: 1.0, bound: ExtReal::finite(4.0) };
        let out = refine_disjoint(&i61, &x, cert, 2.0).unwrap();
        assert_eq!(out.parts.entries(), std::slice::from_ref(&x));
    }

    #[test]
    fn empty_input() {
        let (i61, _) = clusters();
        let cert = Dim0Certificate { scale: 1.0, bound: ExtReal::ZERO };
        let out = refine_disjoint(&i61, &Subset::empty(61), cert, 3.0).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn certificate_is_checked() {
        let (i61, x) = clusters();
        let cert = Dim0Certificate { scale: 1.0, bound: ExtReal::ZERO };
        assert!(matches!(
            refine_disjoint(&i61, &x, cert, 5.0),
            Err(DecompositionError::InvalidCertificate { .. })
        ));
    }
}
