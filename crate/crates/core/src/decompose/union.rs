//! Component bounds for a union `A ∪ B`.

use crate::ext::ExtReal;
use crate::scale::{components_norm, ScaleGraph};
use crate::space::FiniteMetricSpace;
use crate::subset::Subset;

/// The stated bound `M + s + 2r`.
pub fn union_bound(m: f64, s: f64, r: f64) -> f64 {
    m + s + 2.0 * r
}

/// `2M + s + 4r`, which does hold under the same hypothesis: a component of
/// `A ∪ B` meeting `B` lies in one `(M+2r)`-component of `B` together with the
/// `r`-components of `A` within `2r` of it.
pub fn corrected_union_bound(m: f64, s: f64, r: f64) -> f64 {
    2.0 * m + s + 4.0 * r
}

/// Measured hypothesis constants and both bounds for one instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnionBoundCheck {
    /// Scale-r bound of `A`.
    pub m: ExtReal,
    /// Scale-`(M + 2r)` bound of `B`.
    pub s: ExtReal,
    /// Scale-r bound of `A ∪ B`.
    pub measured: ExtReal,
    pub bound: ExtReal,
    pub corrected: ExtReal,
}

impl UnionBoundCheck {
    pub fn holds(&self) -> bool {
        self.measured <= self.bound
    }

    pub fn corrected_holds(&self) -> bool {
        self.measured <= self.corrected
    }

    /// Slack `bound - measured`, or `None` when infinite.
    pub fn slack(&self) -> Option<f64> {
        Some(self.bound.to_finite()? - self.measured.to_finite()?)
    }
}

/// Measures the hypothesis constants of `A`, `B` at `r` and compares
/// `components_norm(A ∪ B, r)` against the bounds.
pub fn check_union_bound(space: &FiniteMetricSpace, a: &Subset, b: &Subset, r: f64) -> UnionBoundCheck {
    let at_r = ScaleGraph::new(space, r);
    let m = at_r.components_norm(a);
    let measured = at_r.components_norm(&a.union(b));
    match m.to_finite() {
        Some(mv) => {
            let s = components_norm(space, b, mv + 2.0 * r);
            let (bound, corrected) = match s.to_finite() {
                Some(sv) => (
                    ExtReal::finite(union_bound(mv, sv, r)),
                    ExtReal::finite(corrected_union_bound(mv, sv, r)),
                ),
                None => (ExtReal::INFINITY, ExtReal::INFINITY),
            };
            UnionBoundCheck {
                m,
                s,
                measured,
                bound,
                corrected,
            }
        }
        None => UnionBoundCheck {
            m,
            s: ExtReal::INFINITY,
            measured,
            bound: ExtReal::INFINITY,
            corrected: ExtReal::INFINITY,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula() {
        assert_eq!(union_bound(2.0, 3.0, 1.0), 7.0);
        assert_eq!(union_bound(0.0, 0.0, 1.5), 3.0);
    }

    #[test]
    fn cluster_and_far_point() {
        let i20 = FiniteMetricSpace::interval(20);
        let a = Subset::from_indices(20, [0, 1, 2]);
        let b = Subset::singleton(20, 10);
        let c = check_union_bound(&i20, &a, &b, 1.0);
        assert_eq!(c.m, ExtReal::finite(2.0));
        assert_eq!(c.s, ExtReal::ZERO);
        assert_eq!(c.measured, ExtReal::finite(2.0));
        assert!(c.holds());
    }

    #[test]
    fn bridging_point_exceeds_stated_bound() {
        // B bridges two A-clusters: diameter 8 against M + s + 2r = 4.
        let i10 = FiniteMetricSpace::interval(10);
        let a = Subset::from_indices(10, [0, 1, 2, 6, 7, 8]);
        let b = Subset::singleton(10, 4);
        let c = check_union_bound(&i10, &a, &b, 1.0);
        assert_eq!((c.m, c.s), (ExtReal::finite(2.0), ExtReal::ZERO));
        assert_eq!(c.measured, ExtReal::finite(8.0));
        assert!(!c.holds());
        assert!(c.corrected_holds());
    }
}
