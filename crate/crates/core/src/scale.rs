//! Closed balls, scale-r-chains and scale-r-components.
//!
//! Two points `x`, `y` are *chain-adjacent at scale r* when their closed
//! r-balls meet, i.e. some ambient witness `z` has `d(z, x) ≤ r` and
//! `d(z, y) ≤ r`. The chain pseudo-metric `d_r` counts the steps of the
//! shortest chain of adjacent points, and scale-r-components are the classes
//! of a set under chains that stay inside the set (witnesses may lie anywhere).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::ext::ExtReal;
use crate::space::FiniteMetricSpace;
use crate::subset::Subset;

/// `(r, M)`: every scale-r-component of the certified set has diameter `≤ M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dim0Certificate {
    pub scale: f64,
    pub bound: ExtReal,
}

impl Dim0Certificate {
    /// The same bound holds at every smaller scale.
    pub fn at_scale(self, smaller: f64) -> Dim0Certificate {
        assert!(smaller <= self.scale, "certificates only transfer downwards");
        Dim0Certificate {
            scale: smaller,
            bound: self.bound,
        }
    }
}

/// Partition of a set into its scale-r-components.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentsPartition {
    pub base: Subset,
    pub scale: f64,
    /// Ordered by smallest member.
    pub classes: Vec<Subset>,
}

/// Precomputed closed balls and chain adjacency of a space at one scale.
#[derive(Clone, Debug)]
pub struct ScaleGraph<'a> {
    space: &'a FiniteMetricSpace,
    scale: f64,
    balls: Vec<Subset>,
    adjacent: Vec<Subset>,
}

impl<'a> ScaleGraph<'a> {
    /// Panics unless `scale` is positive and finite.
    pub fn new(space: &'a FiniteMetricSpace, scale: f64) -> ScaleGraph<'a> {
        assert!(scale > 0.0 && scale.is_finite(), "scale must be positive");
        let n = space.len();
        let balls: Vec<Subset> = (0..n)
            .map(|x| Subset::from_indices(n, (0..n).filter(|&y| space.dist(x, y).within(scale))))
            .collect();
        let adjacent = balls
            .iter()
            .map(|ball| {
                let mut reach = Subset::empty(n);
                for z in ball.iter() {
                    reach.union_with(&balls[z]);
                }
                reach
            })
            .collect();
        ScaleGraph {
            space,
            scale,
            balls,
            adjacent,
        }
    }

    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Closed ball `{y : d(x, y) ≤ r}`.
    pub fn point_ball(&self, x: usize) -> &Subset {
        &self.balls[x]
    }

    /// Points chain-adjacent to `x` (including `x`).
    pub fn neighbours(&self, x: usize) -> &Subset {
        &self.adjacent[x]
    }

    /// `B(A, r) = {x : d(x, A) ≤ r}`.
    pub fn ball(&self, set: &Subset) -> Subset {
        let mut out = Subset::empty(self.space.len());
        for a in set.iter() {
            out.union_with(&self.balls[a]);
        }
        out
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacent[x].contains(y)
    }

    /// `d_r(x, A)` for every point, `None` where no chain reaches `A`.
    pub fn levels_from(&self, set: &Subset) -> Vec<Option<u32>> {
        self.levels_within(set, None)
    }

    fn levels_within(&self, sources: &Subset, domain: Option<&Subset>) -> Vec<Option<u32>> {
        let n = self.space.len();
        let mut level = vec![None; n];
        let mut queue = VecDeque::new();
        for s in sources.iter() {
            level[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            let next = level[x].map(|l| l + 1);
            for y in self.adjacent[x].iter() {
                if level[y].is_none() && domain.is_none_or(|d| d.contains(y)) {
                    level[y] = next;
                    queue.push_back(y);
                }
            }
        }
        level
    }

    /// Length in steps of the shortest scale-r-chain from `x` to `y`.
    pub fn chain_distance(&self, x: usize, y: usize) -> ExtReal {
        if x == y {
            return ExtReal::ZERO;
        }
        let from = Subset::singleton(self.space.len(), x);
        match self.levels_from(&from)[y] {
            Some(l) => ExtReal::from(l),
            None => ExtReal::INFINITY,
        }
    }

    /// Scale-r-components of `set`: chains must stay inside `set`.
    pub fn components(&self, set: &Subset) -> ComponentsPartition {
        let n = self.space.len();
        let mut seen = Subset::empty(n);
        let mut classes = Vec::new();
        for start in set.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut class = Subset::singleton(n, start);
            seen.insert(start);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let mut fresh = self.adjacent[x].intersection(set);
                fresh.difference_with(&seen);
                for y in fresh.iter() {
                    seen.insert(y);
                    class.insert(y);
                    stack.push(y);
                }
            }
            classes.push(class);
        }
        ComponentsPartition {
            base: set.clone(),
            scale: self.scale,
            classes,
        }
    }

    /// Largest diameter of a scale-r-component of `set`; `0` for `∅`.
    pub fn components_norm(&self, set: &Subset) -> ExtReal {
        self.components(set)
            .classes
            .iter()
            .map(|c| set_diameter(self.space, c))
            .max()
            .unwrap_or(ExtReal::ZERO)
    }

    pub fn certificate(&self, set: &Subset) -> Dim0Certificate {
        Dim0Certificate {
            scale: self.scale,
            bound: self.components_norm(set),
        }
    }

    /// `B(C, r) ∩ B(D, r) = ∅`.
    pub fn scale_disjoint(&self, c: &Subset, d: &Subset) -> bool {
        self.ball(c).is_disjoint(&self.ball(d))
    }
}

/// Diameter of a subset; `0` for the empty set.
pub fn set_diameter(space: &FiniteMetricSpace, set: &Subset) -> ExtReal {
    let pts = set.to_vec();
    let mut best = ExtReal::ZERO;
    for (k, &x) in pts.iter().enumerate() {
        for &y in &pts[k + 1..] {
            best = best.max(space.dist(x, y));
        }
    }
    best
}

/// `B(A, r)` without building a [`ScaleGraph`].
pub fn ball(space: &FiniteMetricSpace, set: &Subset, r: f64) -> Subset {
    Subset::from_indices(
        space.len(),
        (0..space.len()).filter(|&x| set.iter().any(|a| space.dist(x, a).within(r))),
    )
}

pub fn chain_metric(space: &FiniteMetricSpace, r: f64, x: usize, y: usize) -> ExtReal {
    ScaleGraph::new(space, r).chain_distance(x, y)
}

pub fn components(space: &FiniteMetricSpace, set: &Subset, r: f64) -> ComponentsPartition {
    ScaleGraph::new(space, r).components(set)
}

pub fn components_norm(space: &FiniteMetricSpace, set: &Subset, r: f64) -> ExtReal {
    ScaleGraph::new(space, r).components_norm(set)
}

pub fn dim0_certificate(space: &FiniteMetricSpace, set: &Subset, r: f64) -> Dim0Certificate {
    ScaleGraph::new(space, r).certificate(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Norm;
    use alloc::sync::Arc;

    fn set(n: usize, pts: &[usize]) -> Subset {
        Subset::from_indices(n, pts.iter().copied())
    }

    #[test]
    fn closed_ball_on_interval() {
        let i10 = FiniteMetricSpace::interval(10);
        assert_eq!(ball(&i10, &set(10, &[3]), 1.5).to_vec(), [2, 3, 4]);
        assert!(ball(&i10, &Subset::empty(10), 3.0).is_empty());
        assert!(ball(&i10, &set(10, &[0, 9]), 100.0).is_full());
        let g = ScaleGraph::new(&i10, 1.5);
        assert_eq!(g.ball(&set(10, &[3])), ball(&i10, &set(10, &[3]), 1.5));
    }

    #[test]
    fn chain_metric_examples() {
        let i10 = FiniteMetricSpace::interval(10);
        assert_eq!(chain_metric(&i10, 1.0, 0, 5), ExtReal::from(3));
        assert_eq!(chain_metric(&i10, 1.0, 4, 4), ExtReal::ZERO);
        let u = FiniteMetricSpace::disjoint_union(vec![i10.clone(), i10]);
        assert_eq!(chain_metric(&u, 1.0, 0, 10), ExtReal::INFINITY);
    }

    #[test]
    fn components_examples() {
        let i10 = FiniteMetricSpace::interval(10);
        let a = set(10, &[0, 1, 2, 6, 7]);
        let p = components(&i10, &a, 1.0);
        assert_eq!(p.classes, vec![set(10, &[0, 1, 2]), set(10, &[6, 7])]);
        assert!(components(&i10, &Subset::empty(10), 1.0).classes.is_empty());
        assert_eq!(
            components(&i10, &set(10, &[4, 5]), 1.0).classes,
            vec![set(10, &[4, 5])]
        );
    }

    #[test]
    fn components_norm_and_certificates() {
        let i10 = FiniteMetricSpace::interval(10);
        let a = set(10, &[0, 1, 2, 6, 7]);
        assert_eq!(components_norm(&i10, &a, 1.0), ExtReal::finite(2.0));
        assert_eq!(components_norm(&i10, &Subset::empty(10), 4.0), ExtReal::ZERO);
        assert_eq!(
            components_norm(&i10, &Subset::full(10), 1.0),
            ExtReal::finite(9.0)
        );
        let c = dim0_certificate(&i10, &a, 1.0);
        assert_eq!((c.scale, c.bound), (1.0, ExtReal::finite(2.0)));
        let e = dim0_certificate(&i10, &Subset::empty(10), 5.0);
        assert_eq!((e.scale, e.bound), (5.0, ExtReal::ZERO));
    }

    #[test]
    fn chains_may_use_outside_witnesses() {
        // {0, 2} in I3 at r = 1: the witness 1 lies outside the set.
        let i3 = FiniteMetricSpace::interval(3);
        let p = components(&i3, &set(3, &[0, 2]), 1.0);
        assert_eq!(p.classes.len(), 1);
        // Without a midpoint the same distance does not connect.
        let s = FiniteMetricSpace::scaled_interval(2, 2.0);
        assert_eq!(components(&s, &Subset::full(2), 1.0).classes.len(), 2);
    }

    #[test]
    fn product_components_project_into_factor_components() {
        let i6 = Arc::new(FiniteMetricSpace::interval(6));
        let p = FiniteMetricSpace::product(i6.clone(), i6.clone(), Norm::L1);
        let a = set(6, &[0, 1, 4, 5]);
        let b = set(6, &[0, 3, 4]);
        let ab = Subset::from_indices(
            36,
            a.iter()
                .flat_map(|x| b.iter().map(move |y| x * 6 + y)),
        );
        let ca = components(&i6, &a, 0.5);
        let cb = components(&i6, &b, 0.5);
        for class in components(&p, &ab, 0.5).classes {
            let xs = Subset::from_indices(6, class.iter().map(|i| i / 6));
            let ys = Subset::from_indices(6, class.iter().map(|i| i % 6));
            assert!(ca.classes.iter().any(|c| xs.is_subset(c)));
            assert!(cb.classes.iter().any(|c| ys.is_subset(c)));
        }
    }
}
