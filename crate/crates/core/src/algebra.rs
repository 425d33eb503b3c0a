//! Arrays and matrices of subsets with the ∩-dot and ×-dot products.
//!
//! Index sets are ordered lists of labels and compatibility is nominal: two
//! arrays combine only when their index sets are equal as ordered lists.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::AlgebraError;
use crate::ext::ExtReal;
use crate::scale::{set_diameter, ScaleGraph};
use crate::space::FiniteMetricSpace;
use crate::subset::Subset;

/// A finite ordered set of distinct labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    labels: Vec<String>,
}

impl IndexSet {
    pub fn new<I, S>(labels: I) -> Result<IndexSet, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        Ok(IndexSet { labels })
    }

    /// `"0", "1", …, "n-1"`.
    pub fn range(n: usize) -> IndexSet {
        IndexSet {
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    /// `S × T` with labels `"(s,t)"`, `t` varying fastest.
    pub fn product(&self, other: &IndexSet) -> IndexSet {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for s in &self.labels {
            for t in &other.labels {
                labels.push(format!("({s},{t})"));
            }
        }
        IndexSet { labels }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn ensure_eq(&self, other: &IndexSet) -> Result<(), AlgebraError> {
        if self == other {
            Ok(())
        } else {
            Err(AlgebraError::IndexMismatch {
                left: self.labels.clone(),
                right: other.labels.clone(),
            })
        }
    }
}

fn same_space(left: usize, right: usize) -> Result<(), AlgebraError> {
    if left == right {
        Ok(())
    } else {
        Err(AlgebraError::SpaceMismatch { left, right })
    }
}

fn product_universe(
    product: &FiniteMetricSpace,
    left: usize,
    right: usize,
) -> Result<usize, AlgebraError> {
    match product.product_factors() {
        Some((l, r, _)) if l.len() == left && r.len() == right => Ok(product.len()),
        _ => Err(AlgebraError::NotAProduct),
    }
}

/// `A × B` as a subset of `product`, whose factor sizes were already checked.
fn box_set(a: &Subset, b: &Subset, universe: usize) -> Subset {
    let width = b.universe();
    Subset::from_indices(
        universe,
        a.iter().flat_map(|x| b.iter().map(move |y| x * width + y)),
    )
}

/// A subspace array: a function from an index set to subsets of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetArray {
    universe: usize,
    index: IndexSet,
    entries: Vec<Subset>,
}

impl SubsetArray {
    pub fn new(
        universe: usize,
        index: IndexSet,
        entries: Vec<Subset>,
    ) -> Result<SubsetArray, AlgebraError> {
        if entries.len() != index.len() {
            return Err(AlgebraError::EntryCount {
                expected: index.len(),
                found: entries.len(),
            });
        }
        for e in &entries {
            same_space(universe, e.universe())?;
        }
        Ok(SubsetArray {
            universe,
            index,
            entries,
        })
    }

    /// Indexed by `0..entries.len()`.
    pub fn from_entries(universe: usize, entries: Vec<Subset>) -> Result<SubsetArray, AlgebraError> {
        SubsetArray::new(universe, IndexSet::range(entries.len()), entries)
    }

    /// `array(Y)`: every entry equal to `Y`.
    pub fn constant(y: &Subset, index: IndexSet) -> SubsetArray {
        SubsetArray {
            universe: y.universe(),
            entries: (0..index.len()).map(|_| y.clone()).collect(),
            index,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn entries(&self) -> &[Subset] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Subset> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Subset {
        &self.entries[i]
    }

    pub fn get_label(&self, label: &str) -> Option<&Subset> {
        self.index.position(label).map(|i| &self.entries[i])
    }

    fn compatible(&self, other: &SubsetArray) -> Result<(), AlgebraError> {
        same_space(self.universe, other.universe)?;
        self.index.ensure_eq(&other.index)
    }

    /// `𝒜 ·∩ ℬ = ⋃ₛ 𝒜(s) ∩ ℬ(s)`.
    pub fn cap_dot(&self, other: &SubsetArray) -> Result<Subset, AlgebraError> {
        self.compatible(other)?;
        let mut out = Subset::empty(self.universe);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            out.union_with(&a.intersection(b));
        }
        Ok(out)
    }

    /// Set-theoretic norm `𝒜 ·∩ 𝒜`, the union of the entries.
    pub fn set_norm(&self) -> Subset {
        let mut out = Subset::empty(self.universe);
        for e in &self.entries {
            out.union_with(e);
        }
        out
    }

    pub fn is_cover(&self) -> bool {
        self.set_norm().is_full()
    }

    pub fn union(&self, other: &SubsetArray) -> Result<SubsetArray, AlgebraError> {
        self.compatible(other)?;
        Ok(SubsetArray {
            universe: self.universe,
            index: self.index.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.union(b))
                .collect(),
        })
    }

    /// `𝒜 ≤ ℬ`: entrywise inclusion.
    pub fn leq(&self, other: &SubsetArray) -> Result<bool, AlgebraError> {
        self.compatible(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.is_subset(b)))
    }

    /// Scalar product `B · 𝒜`: entrywise intersection with `B`.
    pub fn scalar_cap(&self, b: &Subset) -> Result<SubsetArray, AlgebraError> {
        same_space(self.universe, b.universe())?;
        Ok(self.map(|e| e.intersection(b)))
    }

    pub fn map(&self, f: impl FnMut(&Subset) -> Subset) -> SubsetArray {
        SubsetArray {
            universe: self.universe,
            index: self.index.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// `B(𝒜, r)` at the graph's scale.
    pub fn ball(&self, graph: &ScaleGraph<'_>) -> SubsetArray {
        self.map(|e| graph.ball(e))
    }

    /// Supremum of the entry diameters.
    pub fn metric_norm(&self, space: &FiniteMetricSpace) -> ExtReal {
        self.entries
            .iter()
            .map(|e| set_diameter(space, e))
            .max()
            .unwrap_or(ExtReal::ZERO)
    }

    /// `1 × S` matrix with this array as its row.
    pub fn as_row(&self) -> SubsetMatrix {
        SubsetMatrix {
            universe: self.universe,
            rows: IndexSet::range(1),
            cols: self.index.clone(),
            entries: self.entries.clone(),
        }
    }

    /// `S × 1` matrix, the transpose of [`SubsetArray::as_row`].
    pub fn as_column(&self) -> SubsetMatrix {
        SubsetMatrix {
            universe: self.universe,
            rows: self.index.clone(),
            cols: IndexSet::range(1),
            entries: self.entries.clone(),
        }
    }

    /// `𝒜 ·× ℬ = ⋃ₛ 𝒜(s) × ℬ(s)` inside `product = X × Y`.
    pub fn cross_dot(
        &self,
        other: &SubsetArray,
        product: &FiniteMetricSpace,
    ) -> Result<Subset, AlgebraError> {
        self.index.ensure_eq(&other.index)?;
        let n = product_universe(product, self.universe, other.universe)?;
        let mut out = Subset::empty(n);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            out.union_with(&box_set(a, b, n));
        }
        Ok(out)
    }

    /// `𝒜 × ℬ`, indexed by `S × T`.
    pub fn cartesian(
        &self,
        other: &SubsetArray,
        product: &FiniteMetricSpace,
    ) -> Result<SubsetArray, AlgebraError> {
        let n = product_universe(product, self.universe, other.universe)?;
        let mut entries = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(box_set(a, b, n));
            }
        }
        Ok(SubsetArray {
            universe: n,
            index: self.index.product(&other.index),
            entries,
        })
    }
}

/// A subspace `S × T`-matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetMatrix {
    universe: usize,
    rows: IndexSet,
    cols: IndexSet,
    entries: Vec<Subset>,
}

impl SubsetMatrix {
    pub fn new(
        universe: usize,
        rows: IndexSet,
        cols: IndexSet,
        entries: Vec<Subset>,
    ) -> Result<SubsetMatrix, AlgebraError> {
        let expected = rows.len() * cols.len();
        if entries.len() != expected {
            return Err(AlgebraError::EntryCount {
                expected,
                found: entries.len(),
            });
        }
        for e in &entries {
            same_space(universe, e.universe())?;
        }
        Ok(SubsetMatrix {
            universe,
            rows,
            cols,
            entries,
        })
    }

    /// Every entry empty.
    pub fn empty(universe: usize, rows: IndexSet, cols: IndexSet) -> SubsetMatrix {
        let entries = (0..rows.len() * cols.len())
            .map(|_| Subset::empty(universe))
            .collect();
        SubsetMatrix {
            universe,
            rows,
            cols,
            entries,
        }
    }

    /// `ℐ_X`: `X` on the diagonal, `∅` elsewhere.
    pub fn identity(universe: usize, index: IndexSet) -> SubsetMatrix {
        let mut m = SubsetMatrix::empty(universe, index.clone(), index);
        for i in 0..m.rows.len() {
            m.set(i, i, Subset::full(universe));
        }
        m
    }

    /// Matrix whose `j`-th column is `columns[j]`; all columns share `rows`.
    pub fn from_columns(
        universe: usize,
        cols: IndexSet,
        columns: &[SubsetArray],
    ) -> Result<SubsetMatrix, AlgebraError> {
        if columns.len() != cols.len() {
            return Err(AlgebraError::EntryCount {
                expected: cols.len(),
                found: columns.len(),
            });
        }
        let rows = match columns.first() {
            Some(c) => c.index.clone(),
            None => IndexSet::range(0),
        };
        let mut m = SubsetMatrix::empty(universe, rows.clone(), cols);
        for (j, c) in columns.iter().enumerate() {
            same_space(universe, c.universe)?;
            rows.ensure_eq(&c.index)?;
            for (i, e) in c.entries.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        Ok(m)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn rows(&self) -> &IndexSet {
        &self.rows
    }

    pub fn cols(&self) -> &IndexSet {
        &self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn entries(&self) -> &[Subset] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Subset {
        assert!(i < self.rows.len() && j < self.cols.len());
        &self.entries[i * self.cols.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Subset) {
        assert!(i < self.rows.len() && j < self.cols.len());
        assert_eq!(value.universe(), self.universe, "subsets of different spaces");
        let w = self.cols.len();
        self.entries[i * w + j] = value;
    }

    /// Row `i`, indexed by the column labels.
    pub fn row(&self, i: usize) -> SubsetArray {
        let w = self.cols.len();
        SubsetArray {
            universe: self.universe,
            index: self.cols.clone(),
            entries: self.entries[i * w..(i + 1) * w].to_vec(),
        }
    }

    /// Column `j`, indexed by the row labels.
    pub fn column(&self, j: usize) -> SubsetArray {
        SubsetArray {
            universe: self.universe,
            index: self.rows.clone(),
            entries: (0..self.rows.len()).map(|i| self.get(i, j).clone()).collect(),
        }
    }

    pub fn transpose(&self) -> SubsetMatrix {
        let (h, w) = self.shape();
        let mut entries = Vec::with_capacity(h * w);
        for j in 0..w {
            for i in 0..h {
                entries.push(self.get(i, j).clone());
            }
        }
        SubsetMatrix {
            universe: self.universe,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries,
        }
    }

    /// Matrix ∩-product: entry `(s, r)` is row `s` of `self` ·∩ column `r` of `other`.
    pub fn matmul_cap(&self, other: &SubsetMatrix) -> Result<SubsetMatrix, AlgebraError> {
        same_space(self.universe, other.universe)?;
        self.cols.ensure_eq(&other.rows)?;
        let (h, inner) = self.shape();
        let w = other.cols.len();
        let mut entries = Vec::with_capacity(h * w);
        for s in 0..h {
            for r in 0..w {
                let mut acc = Subset::empty(self.universe);
                for t in 0..inner {
                    acc.union_with(&self.get(s, t).intersection(other.get(t, r)));
                }
                entries.push(acc);
            }
        }
        Ok(SubsetMatrix {
            universe: self.universe,
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            entries,
        })
    }

    /// Matrix ×-product into `product = X × Y`.
    pub fn matmul_cross(
        &self,
        other: &SubsetMatrix,
        product: &FiniteMetricSpace,
    ) -> Result<SubsetMatrix, AlgebraError> {
        self.cols.ensure_eq(&other.rows)?;
        let n = product_universe(product, self.universe, other.universe)?;
        let (h, inner) = self.shape();
        let w = other.cols.len();
        let mut entries = Vec::with_capacity(h * w);
        for s in 0..h {
            for r in 0..w {
                let mut acc = Subset::empty(n);
                for t in 0..inner {
                    acc.union_with(&box_set(self.get(s, t), other.get(t, r), n));
                }
                entries.push(acc);
            }
        }
        Ok(SubsetMatrix {
            universe: n,
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            entries,
        })
    }

    pub fn union(&self, other: &SubsetMatrix) -> Result<SubsetMatrix, AlgebraError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            a.union_with(b);
        }
        Ok(out)
    }

    pub fn leq(&self, other: &SubsetMatrix) -> Result<bool, AlgebraError> {
        self.same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.is_subset(b)))
    }

    fn same_shape(&self, other: &SubsetMatrix) -> Result<(), AlgebraError> {
        same_space(self.universe, other.universe)?;
        self.rows.ensure_eq(&other.rows)?;
        self.cols.ensure_eq(&other.cols)
    }

    /// Entries off the (positional) diagonal are empty.
    pub fn is_diagonal(&self) -> bool {
        let (h, w) = self.shape();
        (0..h).all(|i| (0..w).all(|j| i == j || self.get(i, j).is_empty()))
    }

    /// Every column is a cover: each diagonal entry of `ℳᵀ ·∩ ℳ` is `X`.
    pub fn columns_cover(&self) -> bool {
        let gram = self
            .transpose()
            .matmul_cap(self)
            .expect("transpose is always compatible");
        (0..gram.rows.len()).all(|j| gram.get(j, j).is_full())
    }

    /// Every row is a cover: each diagonal entry of `ℳ ·∩ ℳᵀ` is `X`.
    pub fn rows_cover(&self) -> bool {
        self.transpose().columns_cover()
    }

    pub fn map(&self, f: impl FnMut(&Subset) -> Subset) -> SubsetMatrix {
        SubsetMatrix {
            universe: self.universe,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// `B(ℳ, r)` at the graph's scale.
    pub fn ball(&self, graph: &ScaleGraph<'_>) -> SubsetMatrix {
        self.map(|e| graph.ball(e))
    }

    /// Reads a `1 × n` or `n × 1` matrix as an array.
    pub fn to_array(&self) -> Option<SubsetArray> {
        match self.shape() {
            (1, _) => Some(self.row(0)),
            (_, 1) => Some(self.column(0)),
            _ => None,
        }
    }
}
