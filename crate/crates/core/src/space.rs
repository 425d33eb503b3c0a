//! Finite ∞-pseudo-metric spaces and their generators.
//!
//! A [`FiniteMetricSpace`] keeps the description it was built from
//! ([`Metric`]) rather than always materialising a distance table: grids and
//! products are evaluated on demand, which keeps large boxes cheap and lets the
//! file format reproduce a space exactly from its descriptor.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::MetricError;
use crate::ext::ExtReal;

/// Coordinatewise combination rule for product metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Norm {
    L1,
    Sup,
}

impl Norm {
    pub fn combine(self, a: ExtReal, b: ExtReal) -> ExtReal {
        match self {
            Norm::L1 => a + b,
            Norm::Sup => a.max(b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::Sup => "sup",
        }
    }
}

/// An undirected weighted edge for shortest-path spaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// How distances of a space are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    /// Explicit row-major `n × n` table.
    Table(Vec<ExtReal>),
    /// `{0, spacing, 2·spacing, …}` with the absolute-difference metric.
    Interval { len: usize, spacing: f64 },
    /// Integer box `∏ [0, dims[i])`, last coordinate varying fastest.
    Grid { dims: Vec<usize>, norm: Norm },
    /// Shortest-path metric of a weighted graph; unreachable pairs are at `∞`.
    Graph { edges: Vec<Edge>, dist: Vec<ExtReal> },
    /// Summands at mutual distance `∞`.
    DisjointUnion {
        parts: Vec<FiniteMetricSpace>,
        offsets: Vec<usize>,
    },
    /// `left × right`, point `(a, b)` at index `a · |right| + b`.
    Product {
        left: Arc<FiniteMetricSpace>,
        right: Arc<FiniteMetricSpace>,
        norm: Norm,
    },
}

/// A finite set of labelled points with an ∞-pseudo-metric.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    name: String,
    labels: Vec<String>,
    metric: Metric,
}

impl FiniteMetricSpace {
    /// `I_n`: points `0..n` with `d(i, j) = |i − j|`.
    pub fn interval(len: usize) -> FiniteMetricSpace {
        FiniteMetricSpace::scaled_interval(len, 1.0)
    }

    /// `{0, c, 2c, …}`: an interval whose distinct points are `c`-discrete.
    pub fn scaled_interval(len: usize, spacing: f64) -> FiniteMetricSpace {
        assert!(spacing > 0.0 && spacing.is_finite());
        let name = if spacing == 1.0 {
            format!("I{len}")
        } else {
            format!("{spacing}*I{len}")
        };
        FiniteMetricSpace {
            name,
            labels: (0..len).map(|i| i.to_string()).collect(),
            metric: Metric::Interval { len, spacing },
        }
    }

    /// Integer box with the given side lengths.
    pub fn grid(dims: &[usize], norm: Norm) -> FiniteMetricSpace {
        let n: usize = dims.iter().product();
        let mut labels = Vec::with_capacity(n);
        let mut coords = vec![0usize; dims.len()];
        for _ in 0..n {
            labels.push(tuple_label(coords.iter().map(|c| c.to_string())));
            advance(&mut coords, dims);
        }
        let shape: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
        FiniteMetricSpace {
            name: format!("grid{}-{}", shape.join("x"), norm.name()),
            labels,
            metric: Metric::Grid {
                dims: dims.to_vec(),
                norm,
            },
        }
    }

    /// Validates a full distance table.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        dist: Vec<ExtReal>,
    ) -> Result<FiniteMetricSpace, MetricError> {
        let n = labels.len();
        if dist.len() != n * n {
            return Err(MetricError::Shape {
                expected: n * n,
                found: dist.len(),
            });
        }
        validate_table(n, |i, j| dist[i * n + j])?;
        Ok(FiniteMetricSpace {
            name: name.into(),
            labels,
            metric: Metric::Table(dist),
        })
    }

    /// Shortest-path space of an undirected weighted graph on `labels`.
    pub fn from_graph(
        name: impl Into<String>,
        labels: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<FiniteMetricSpace, MetricError> {
        let n = labels.len();
        let mut dist = vec![ExtReal::INFINITY; n * n];
        for i in 0..n {
            dist[i * n + i] = ExtReal::ZERO;
        }
        for e in &edges {
            if e.a >= n || e.b >= n {
                return Err(MetricError::PointOutOfRange(e.a.max(e.b)));
            }
            let w = ExtReal::new(e.weight).ok_or(MetricError::Negative { x: e.a, y: e.b })?;
            let (ab, ba) = (e.a * n + e.b, e.b * n + e.a);
            if w < dist[ab] {
                dist[ab] = w;
                dist[ba] = w;
            }
        }
        // Floyd–Warshall; graphs here are small.
        for k in 0..n {
            for i in 0..n {
                let ik = dist[i * n + k];
                if ik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = ik + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                    }
                }
            }
        }
        Ok(FiniteMetricSpace {
            name: name.into(),
            labels,
            metric: Metric::Graph { edges, dist },
        })
    }

    /// Disjoint union; labels are prefixed with the summand position.
    pub fn disjoint_union(parts: Vec<FiniteMetricSpace>) -> FiniteMetricSpace {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut labels = Vec::new();
        let mut names = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            offsets.push(labels.len());
            labels.extend(p.labels.iter().map(|l| format!("{k}:{l}")));
            names.push(p.name.clone());
        }
        FiniteMetricSpace {
            name: format!("union({})", names.join(",")),
            labels,
            metric: Metric::DisjointUnion { parts, offsets },
        }
    }

    /// `left × right` with the chosen coordinatewise norm.
    pub fn product(
        left: Arc<FiniteMetricSpace>,
        right: Arc<FiniteMetricSpace>,
        norm: Norm,
    ) -> FiniteMetricSpace {
        let mut labels = Vec::with_capacity(left.len() * right.len());
        for a in &left.labels {
            for b in &right.labels {
                labels.push(format!("({a},{b})"));
            }
        }
        FiniteMetricSpace {
            name: format!("{}x{}-{}", left.name, right.name, norm.name()),
            labels,
            metric: Metric::Product { left, right, norm },
        }
    }

    /// The one-point space, the empty product.
    pub fn point() -> FiniteMetricSpace {
        FiniteMetricSpace {
            name: String::from("pt"),
            labels: vec![String::from("*")],
            metric: Metric::Table(vec![ExtReal::ZERO]),
        }
    }

    /// Nested product `((f₀ × f₁) × f₂) × …`; the one-point space when empty.
    pub fn product_of(factors: &[Arc<FiniteMetricSpace>], norm: Norm) -> FiniteMetricSpace {
        let mut iter = factors.iter();
        let Some(first) = iter.next() else {
            return FiniteMetricSpace::point();
        };
        let mut acc = (**first).clone();
        for f in iter {
            acc = FiniteMetricSpace::product(Arc::new(acc), f.clone(), norm);
        }
        acc
    }

    /// The points of `set` with the restricted metric, as a table.
    pub fn subspace(&self, set: &crate::subset::Subset) -> FiniteMetricSpace {
        let pts = set.to_vec();
        let mut dist = Vec::with_capacity(pts.len() * pts.len());
        for &i in &pts {
            for &j in &pts {
                dist.push(self.dist(i, j));
            }
        }
        FiniteMetricSpace {
            name: format!("sub({})", self.name),
            labels: pts.iter().map(|&i| self.labels[i].clone()).collect(),
            metric: Metric::Table(dist),
        }
    }

    /// Precomposes the metric with `beta` and materialises a table.
    ///
    /// `beta` should be non-decreasing, subadditive and vanish at 0; the result
    /// is re-validated, so a `beta` breaking the triangle inequality is
    /// reported as a [`MetricError`].
    pub fn rescaled(&self, beta: impl Fn(f64) -> f64) -> Result<FiniteMetricSpace, MetricError> {
        let n = self.len();
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let d = self.dist(i, j);
                let v = if d.is_infinite() {
                    ExtReal::INFINITY
                } else {
                    ExtReal::new(beta(d.value())).ok_or(MetricError::Negative { x: i, y: j })?
                };
                dist.push(v);
            }
        }
        FiniteMetricSpace::from_table(format!("beta({})", self.name), self.labels.clone(), dist)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FiniteMetricSpace {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> ExtReal {
        debug_assert!(i < self.len() && j < self.len());
        if i == j {
            return ExtReal::ZERO;
        }
        match &self.metric {
            Metric::Table(d) | Metric::Graph { dist: d, .. } => d[i * self.len() + j],
            Metric::Interval { spacing, .. } => {
                ExtReal::finite(i.abs_diff(j) as f64 * spacing)
            }
            Metric::Grid { dims, norm } => {
                let (mut a, mut b) = (i, j);
                let mut acc = ExtReal::ZERO;
                for &side in dims.iter().rev() {
                    let diff = ExtReal::finite((a % side).abs_diff(b % side) as f64);
                    acc = norm.combine(acc, diff);
                    a /= side;
                    b /= side;
                }
                acc
            }
            Metric::DisjointUnion { parts, offsets } => {
                let pi = offsets.partition_point(|&o| o <= i) - 1;
                let pj = offsets.partition_point(|&o| o <= j) - 1;
                if pi == pj {
                    parts[pi].dist(i - offsets[pi], j - offsets[pi])
                } else {
                    ExtReal::INFINITY
                }
            }
            Metric::Product { left, right, norm } => {
                let m = right.len();
                norm.combine(left.dist(i / m, j / m), right.dist(i % m, j % m))
            }
        }
    }

    /// `d(x, A) = min_{a ∈ A} d(x, a)`; `∞` for empty `A`.
    pub fn dist_to_set<I: IntoIterator<Item = usize>>(&self, x: usize, set: I) -> ExtReal {
        set.into_iter()
            .map(|a| self.dist(x, a))
            .min()
            .unwrap_or(ExtReal::INFINITY)
    }

    /// Factors and norm of a product space.
    pub fn product_factors(&self) -> Option<(&FiniteMetricSpace, &FiniteMetricSpace, Norm)> {
        match &self.metric {
            Metric::Product { left, right, norm } => Some((left, right, *norm)),
            _ => None,
        }
    }

    /// Splits a product-space index into `(left, right)` indices.
    pub fn product_coords(&self, index: usize) -> Option<(usize, usize)> {
        match &self.metric {
            Metric::Product { right, .. } => Some((index / right.len(), index % right.len())),
            _ => None,
        }
    }

    /// Index of `(a, b)` in a product space.
    pub fn product_index(&self, a: usize, b: usize) -> Option<usize> {
        match &self.metric {
            Metric::Product { right, .. } => Some(a * right.len() + b),
            _ => None,
        }
    }

    /// Grid coordinates of a point, when the space is a grid or an interval.
    pub fn grid_coords(&self, index: usize) -> Option<Vec<usize>> {
        match &self.metric {
            Metric::Grid { dims, .. } => {
                let mut out = vec![0; dims.len()];
                let mut rest = index;
                for (slot, &side) in out.iter_mut().zip(dims).rev() {
                    *slot = rest % side;
                    rest /= side;
                }
                Some(out)
            }
            Metric::Interval { .. } => Some(vec![index]),
            _ => None,
        }
    }

    /// Re-checks every ∞-pseudo-metric axiom; `O(n³)`.
    pub fn validate(&self) -> Result<(), MetricError> {
        validate_table(self.len(), |i, j| self.dist(i, j))
    }

    /// Maximum distance between points of the space.
    pub fn diameter(&self) -> ExtReal {
        let n = self.len();
        let mut best = ExtReal::ZERO;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.dist(i, j));
            }
        }
        best
    }
}

fn tuple_label<I: Iterator<Item = String>>(parts: I) -> String {
    let parts: Vec<String> = parts.collect();
    if parts.len() == 1 {
        parts.into_iter().next().unwrap_or_default()
    } else {
        format!("({})", parts.join(","))
    }
}

fn advance(coords: &mut [usize], dims: &[usize]) {
    for k in (0..coords.len()).rev() {
        coords[k] += 1;
        if coords[k] < dims[k] {
            return;
        }
        coords[k] = 0;
    }
}

fn validate_table(n: usize, d: impl Fn(usize, usize) -> ExtReal) -> Result<(), MetricError> {
    for x in 0..n {
        if d(x, x) != ExtReal::ZERO {
            return Err(MetricError::NonzeroDiagonal { x });
        }
        for y in x + 1..n {
            if d(x, y) != d(y, x) {
                return Err(MetricError::Asymmetric { x, y });
            }
        }
    }
    for z in 0..n {
        for x in 0..n {
            let xz = d(x, z);
            if xz.is_infinite() {
                continue;
            }
            for y in 0..n {
                let zy = d(z, y);
                if zy.is_finite() && d(x, y) > xz + zy {
                    return Err(MetricError::Triangle { x, y, z });
                }
            }
        }
    }
    Ok(())
}
