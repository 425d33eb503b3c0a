//! Weighted products of finitely many factors: the asymptotic (capped) and
//! reduced (weighted ℓ₁) product metrics, c-discreteness, and distance
//! envelopes between two metrics on one point set.
//!
//! Envelopes are an empirical certificate of coarse equivalence over the
//! enumerated pairs, not a proof.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::ProductError;
use crate::ext::ExtReal;
use crate::space::FiniteMetricSpace;

/// `α(d) > 0` for each factor, in factor order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFn {
    weights: Vec<f64>,
}

impl WeightFn {
    pub fn new(weights: Vec<f64>) -> Result<WeightFn, ProductError> {
        if weights.iter().all(|&w| w > 0.0 && w.is_finite()) {
            Ok(WeightFn { weights })
        } else {
            Err(ProductError::BadWeight)
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<WeightFn, ProductError> {
        WeightFn::new(self.weights.iter().map(|w| w * factor).collect())
    }

    fn check(&self, factors: usize) -> Result<(), ProductError> {
        if self.weights.len() == factors {
            Ok(())
        } else {
            Err(ProductError::WeightCount {
                expected: factors,
                found: self.weights.len(),
            })
        }
    }
}

/// One point per factor.
pub type ProductPoint = [usize];

/// `Σ r_d` with `r_d = 0` when the coordinates agree, `α(d)` when they differ
/// by at most `α(d)`, and `ρ_d` otherwise.
pub fn asymptotic_metric(
    factors: &[FiniteMetricSpace],
    w: &WeightFn,
    u: &ProductPoint,
    v: &ProductPoint,
) -> ExtReal {
    let mut acc = ExtReal::ZERO;
    for (d, f) in factors.iter().enumerate() {
        if u[d] == v[d] {
            continue;
        }
        let rho = f.dist(u[d], v[d]);
        let alpha = w.weights[d];
        acc = acc + if rho.within(alpha) { ExtReal::finite(alpha) } else { rho };
    }
    acc
}

/// `Σ α(d) · ρ_d(u(d), v(d))`.
pub fn reduced_metric(
    factors: &[FiniteMetricSpace],
    w: &WeightFn,
    u: &ProductPoint,
    v: &ProductPoint,
) -> ExtReal {
    factors
        .iter()
        .enumerate()
        .map(|(d, f)| f.dist(u[d], v[d]).scale(w.weights[d]))
        .fold(ExtReal::ZERO, |a, b| a + b)
}

/// Distinct points are at distance at least `c`.
pub fn is_c_discrete(space: &FiniteMetricSpace, c: f64) -> bool {
    let n = space.len();
    (0..n).all(|i| (i + 1..n).all(|j| space.dist(i, j) >= ExtReal::finite(c)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProductMetricKind {
    Asymptotic,
    Reduced,
}

impl ProductMetricKind {
    pub fn name(self) -> &'static str {
        match self {
            ProductMetricKind::Asymptotic => "asymptotic",
            ProductMetricKind::Reduced => "reduced",
        }
    }
}

/// A materialised weighted product with the coordinates of its points.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedProduct {
    pub space: FiniteMetricSpace,
    pub points: Vec<Vec<usize>>,
    /// Whether only a leading block of factors was enumerated.
    pub sampled: bool,
}

/// Points of `∏ factors`, last coordinate fastest. When the full product
/// exceeds `budget` and `sample` is set, the longest leading block of
/// factors that fits is enumerated and the other coordinates are pinned to 0.
pub fn product_points(
    sizes: &[usize],
    budget: usize,
    sample: bool,
) -> Result<(Vec<Vec<usize>>, bool), ProductError> {
    let mut total: usize = 1;
    let mut fit = 0;
    for &s in sizes {
        match total.checked_mul(s) {
            Some(t) if t <= budget => {
                total = t;
                fit += 1;
            }
            _ => break,
        }
    }
    let sampled = fit < sizes.len();
    if sampled && !sample {
        let size = sizes.iter().try_fold(1usize, |a, &s| a.checked_mul(s)).unwrap_or(usize::MAX);
        return Err(ProductError::OverBudget { size, budget });
    }
    let mut points = Vec::with_capacity(total);
    let mut coords = alloc::vec![0usize; sizes.len()];
    for _ in 0..total {
        points.push(coords.clone());
        for d in (0..fit).rev() {
            coords[d] += 1;
            if coords[d] < sizes[d] {
                break;
            }
            coords[d] = 0;
        }
    }
    Ok((points, sampled))
}

/// The product point set with the chosen weighted metric, validated.
pub fn build_product_space(
    factors: &[FiniteMetricSpace],
    w: &WeightFn,
    kind: ProductMetricKind,
    budget: usize,
    sample: bool,
) -> Result<WeightedProduct, ProductError> {
    w.check(factors.len())?;
    let sizes: Vec<usize> = factors.iter().map(FiniteMetricSpace::len).collect();
    let (points, sampled) = product_points(&sizes, budget, sample)?;
    let n = points.len();
    let mut dist = Vec::with_capacity(n * n);
    for u in &points {
        for v in &points {
            dist.push(match kind {
                ProductMetricKind::Asymptotic => asymptotic_metric(factors, w, u, v),
                ProductMetricKind::Reduced => reduced_metric(factors, w, u, v),
            });
        }
    }
    let labels = points
        .iter()
        .map(|p| {
            let parts: Vec<&str> = p
                .iter()
                .zip(factors)
                .map(|(&i, f)| f.labels()[i].as_str())
                .collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let space = FiniteMetricSpace::from_table(format!("{}-product", kind.name()), labels, dist)?;
    Ok(WeightedProduct {
        space,
        points,
        sampled,
    })
}

/// One row of an envelope table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeRow {
    pub threshold: f64,
    /// `max { d_A(u, v) : d_B(u, v) ≤ t }`.
    pub forward: ExtReal,
    /// `max { d_B(u, v) : d_A(u, v) ≤ t }`.
    pub backward: ExtReal,
}

/// Sorted distinct finite distances occurring in either space, `0` included.
pub fn threshold_grid(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Vec<f64> {
    let mut ts = alloc::vec![0.0];
    for s in [a, b] {
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if let Some(d) = s.dist(i, j).to_finite() {
                    ts.push(d);
                }
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Forward and backward envelopes of the identity between two metrics on
/// one point set, over all pairs.
pub fn coarse_envelope(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
    thresholds: &[f64],
) -> Result<Vec<EnvelopeRow>, ProductError> {
    if a.labels() != b.labels() {
        return Err(ProductError::PointSetMismatch);
    }
    let n = a.len();
    let mut pairs: Vec<(ExtReal, ExtReal)> = Vec::with_capacity(n * n / 2 + 1);
    pairs.push((ExtReal::ZERO, ExtReal::ZERO));
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((a.dist(i, j), b.dist(i, j)));
        }
    }
    Ok(thresholds
        .iter()
        .map(|&t| {
            let mut forward = ExtReal::ZERO;
            let mut backward = ExtReal::ZERO;
            for &(da, db) in &pairs {
                if db.within(t) {
                    forward = forward.max(da);
                }
                if da.within(t) {
                    backward = backward.max(db);
                }
            }
            EnvelopeRow {
                threshold: t,
                forward,
                backward,
            }
        })
        .collect())
}

/// Human-readable summary for reports.
pub fn envelope_note(rows: &[EnvelopeRow]) -> String {
    let finite = rows.iter().all(|r| r.forward.is_finite() && r.backward.is_finite());
    format!(
        "{} thresholds, envelopes {} (empirical over all enumerated pairs)",
        rows.len(),
        if finite { "finite" } else { "unbounded" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two() -> Vec<FiniteMetricSpace> {
        vec![FiniteMetricSpace::interval(4), FiniteMetricSpace::interval(4)]
    }

    #[test]
    fn metric_examples() {
        let f = two();
        let w = WeightFn::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(asymptotic_metric(&f, &w, &[0, 0], &[1, 3]), ExtReal::finite(4.0));
        assert_eq!(reduced_metric(&f, &w, &[0, 0], &[1, 3]), ExtReal::finite(7.0));
        assert_eq!(asymptotic_metric(&f, &w, &[2, 1], &[2, 1]), ExtReal::ZERO);
        // a difference exactly at the weight takes the capped case
        assert_eq!(asymptotic_metric(&f, &w, &[0, 0], &[0, 2]), ExtReal::finite(2.0));
        let one = vec![FiniteMetricSpace::interval(10)];
        let w1 = WeightFn::new(vec![2.0]).unwrap();
        assert_eq!(asymptotic_metric(&one, &w1, &[0], &[7]), ExtReal::finite(7.0));
        assert!(WeightFn::new(vec![0.0]).is_err());
    }

    #[test]
    fn infinite_coordinates() {
        let u = FiniteMetricSpace::disjoint_union(vec![FiniteMetricSpace::point(), FiniteMetricSpace::point()]);
        let f = vec![u];
        let w = WeightFn::new(vec![1.0]).unwrap();
        assert!(reduced_metric(&f, &w, &[0], &[1]).is_infinite());
    }

    #[test]
    fn discreteness() {
        assert!(is_c_discrete(&FiniteMetricSpace::interval(10), 1.0));
        assert!(!is_c_discrete(&FiniteMetricSpace::interval(10), 1.5));
        assert!(is_c_discrete(&FiniteMetricSpace::scaled_interval(5, 4.0), 4.0));
    }

    #[test]
    fn full_and_sampled_products() {
        let w = WeightFn::new(vec![1.0, 1.0]).unwrap();
        let p = build_product_space(&two(), &w, ProductMetricKind::Reduced, 100, false).unwrap();
        assert_eq!(p.space.len(), 16);
        assert!(!p.sampled);
        assert!(build_product_space(&two(), &w, ProductMetricKind::Reduced, 10, false).is_err());
        let s = build_product_space(&two(), &w, ProductMetricKind::Asymptotic, 10, true).unwrap();
        assert_eq!(s.space.len(), 4);
        assert!(s.points.iter().all(|c| c[1] == 0));
    }

    #[test]
    fn envelopes_of_identical_metrics() {
        let i = FiniteMetricSpace::interval(6);
        let rows = coarse_envelope(&i, &i, &threshold_grid(&i, &i)).unwrap();
        assert!(rows.iter().all(|r| r.forward.within(r.threshold)));
        assert!(coarse_envelope(&i, &FiniteMetricSpace::interval(5), &[1.0]).is_err());
    }
}
