//! Augmented matrices `[ℬ|𝒜]` built from a disjoint cover by induction over
//! its parts, cutting the running `ℬ` column along outer rings.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::check_scale;
use super::report::DecompositionReport;
use super::rings::perp_levels;
use crate::algebra::{IndexSet, SubsetArray, SubsetMatrix};
use crate::error::DecompositionError;
use crate::ext::ExtReal;
use crate::scale::{Dim0Certificate, ScaleGraph};
use crate::space::FiniteMetricSpace;
use crate::subset::Subset;

/// `ℳ = [ℬ|𝒜]` with a certificate at scale `r` for every entry.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedMatrix {
    /// Columns labelled `b, a1, …, an`; rows `0..m`.
    pub matrix: SubsetMatrix,
    pub scale: f64,
    /// Row-major, one per entry.
    pub certs: Vec<Dim0Certificate>,
    /// Certificates of the input parts at scale `(m+1)·r`.
    pub part_certs: Vec<Dim0Certificate>,
}

impl AugmentedMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.shape().0
    }

    /// Number of `𝒜` columns.
    pub fn n(&self) -> usize {
        self.matrix.shape().1 - 1
    }

    pub fn cert(&self, i: usize, j: usize) -> Dim0Certificate {
        self.certs[i * self.matrix.shape().1 + j]
    }

    /// Largest recorded bound in column `j`.
    pub fn column_bound(&self, j: usize) -> ExtReal {
        (0..self.rows())
            .map(|i| self.cert(i, j).bound)
            .max()
            .unwrap_or(ExtReal::ZERO)
    }

    pub fn max_bound(&self) -> ExtReal {
        self.certs
            .iter()
            .map(|c| c.bound)
            .max()
            .unwrap_or(ExtReal::ZERO)
    }

    /// The `𝒜` block without the first column.
    pub fn a_block(&self) -> SubsetMatrix {
        let (h, w) = self.matrix.shape();
        let cols = IndexSet::new(self.matrix.cols().labels()[1..].iter().cloned())
            .expect("labels stay distinct");
        let entries = (0..h)
            .flat_map(|i| (1..w).map(move |j| (i, j)))
            .map(|(i, j)| self.matrix.get(i, j).clone())
            .collect();
        SubsetMatrix::new(self.matrix.universe(), self.matrix.rows().clone(), cols, entries)
            .expect("shape is consistent")
    }
}

pub(crate) fn column_labels(n: usize) -> IndexSet {
    let mut labels: Vec<String> = vec![String::from("b")];
    labels.extend((1..=n).map(|i| format!("a{i}")));
    IndexSet::new(labels).expect("distinct")
}

fn validate_parts(space: &FiniteMetricSpace, parts: &SubsetArray) -> Result<(), DecompositionError> {
    if parts.universe() != space.len() {
        return Err(crate::error::AlgebraError::SpaceMismatch {
            left: space.len(),
            right: parts.universe(),
        }
        .into());
    }
    if parts.is_empty() {
        return Err(DecompositionError::PartsDoNotCover(space.len()));
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if parts.get(i).intersects(parts.get(j)) {
                return Err(DecompositionError::PartsOverlap(i, j));
            }
        }
    }
    let covered = parts.set_norm();
    if !covered.is_full() {
        return Err(DecompositionError::PartsDoNotCover(
            space.len() - covered.count(),
        ));
    }
    Ok(())
}

/// Builds an `m × (n+1)` augmented matrix from a disjoint cover `X₀, …, Xₙ`.
///
/// `ℬ` starts as `array(X₀)`. Step `i` takes the rings of `Xᵢ` at chain levels
/// `4, 7, …, 3m+1` (scale `r`), sets `𝒜(j, i) = ring_j ∩ ℬ(j)` and then
/// `ℬ(j) := (Xᵢ ∪ ℬ(j)) \ 𝒜(j, i)`. The result is re-verified; a failed
/// row-cover or disjointness condition is returned as a defect.
pub fn asdim_matrix(
    space: &FiniteMetricSpace,
    parts: &SubsetArray,
    r: f64,
    m: usize,
) -> Result<AugmentedMatrix, DecompositionError> {
    check_scale(r)?;
    if m == 0 {
        return Err(DecompositionError::BadScale(String::from("m = 0")));
    }
    validate_parts(space, parts)?;
    let coarse = ScaleGraph::new(space, (m as f64 + 1.0) * r);
    let part_certs = parts.entries().iter().map(|p| coarse.certificate(p)).collect();

    let graph = ScaleGraph::new(space, r);
    let levels = perp_levels(m);
    let n = parts.len() - 1;
    let mut b: Vec<Subset> = vec![parts.get(0).clone(); m];
    let mut a: Vec<Vec<Subset>> = vec![Vec::with_capacity(n); m];
    for i in 1..=n {
        let y = parts.get(i);
        let dist = graph.levels_from(y);
        for j in 0..m {
            let ring = Subset::from_indices(
                space.len(),
                (0..space.len()).filter(|&x| dist[x] == Some(levels[j])),
            );
            let cut = ring.intersection(&b[j]);
            b[j].union_with(y);
            b[j].difference_with(&cut);
            a[j].push(cut);
        }
    }
    let mut entries = Vec::with_capacity(m * (n + 1));
    for (bj, aj) in b.into_iter().zip(a) {
        entries.push(bj);
        entries.extend(aj);
    }
    let matrix = SubsetMatrix::new(space.len(), IndexSet::range(m), column_labels(n), entries)?;
    let certs = matrix.entries().iter().map(|e| graph.certificate(e)).collect();
    let out = AugmentedMatrix {
        matrix,
        scale: r,
        certs,
        part_certs,
    };
    let report = verify_asdim_matrix(space, &out, r);
    if let Some(failed) = report.failures().first() {
        return Err(DecompositionError::Defect(String::from(*failed)));
    }
    Ok(out)
}

/// Re-checks an augmented matrix independently of how it was built:
/// rows cover `X`, `B(𝒜, r) ·∩ B(𝒜, r)ᵀ` is diagonal, and every recorded
/// certificate is at scale `≥ r` with a bound no smaller than measured.
pub fn verify_asdim_matrix(
    space: &FiniteMetricSpace,
    aug: &AugmentedMatrix,
    r: f64,
) -> DecompositionReport {
    let mut report = DecompositionReport::new();
    report.scale("r", r);
    let m = &aug.matrix;
    let (h, w) = m.shape();
    let shape_ok = w >= 1
        && m.cols().labels().first().map(String::as_str) == Some("b")
        && aug.certs.len() == h * w
        && m.universe() == space.len();
    report.verdict("asdim.shape", shape_ok);
    if !shape_ok {
        return report;
    }
    report.verdict("asdim.row_cover", m.rows_cover());
    let graph = ScaleGraph::new(space, r);
    let a = aug.a_block();
    let diag = a
        .ball(&graph)
        .matmul_cap(&a.transpose().ball(&graph))
        .map(|g| g.is_diagonal())
        .unwrap_or(false);
    report.verdict("asdim.a_diagonal", diag);
    let mut bounds_ok = true;
    for i in 0..h {
        for j in 0..w {
            let label = format!("({},{})", m.rows().labels()[i], m.cols().labels()[j]);
            let recorded = aug.cert(i, j);
            let measured = graph.components_norm(m.get(i, j));
            bounds_ok &= recorded.scale >= r && measured <= recorded.bound && measured.is_finite();
            report.measure(label.clone(), measured);
            report.part(label, m.get(i, j).clone(), Some(recorded));
        }
    }
    report.verdict("asdim.bounds", bounds_ok);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bricks::{interval_bricks, IntervalLayout};

    fn bricks(n: usize, r: f64, m: usize) -> SubsetArray {
        let parts = interval_bricks(n, IntervalLayout::for_scale(r, m));
        SubsetArray::from_entries(n, parts.to_vec()).unwrap()
    }

    #[test]
    fn interval_matrix_passes() {
        let i64 = FiniteMetricSpace::interval(64);
        let aug = asdim_matrix(&i64, &bricks(64, 2.0, 2), 2.0, 2).unwrap();
        assert_eq!(aug.matrix.shape(), (2, 2));
        assert_eq!(aug.matrix.cols().labels(), ["b", "a1"]);
        assert!(verify_asdim_matrix(&i64, &aug, 2.0).passed());
    }

    #[test]
    fn single_part_gives_one_column() {
        let i10 = FiniteMetricSpace::interval(10);
        let parts = SubsetArray::from_entries(10, vec![Subset::full(10)]).unwrap();
        let aug = asdim_matrix(&i10, &parts, 1.0, 3).unwrap();
        assert_eq!(aug.matrix.shape(), (3, 1));
        assert!(aug.matrix.column(0).entries().iter().all(Subset::is_full));
    }

    #[test]
    fn overlapping_parts_rejected() {
        let i10 = FiniteMetricSpace::interval(10);
        let parts =
            SubsetArray::from_entries(10, vec![Subset::full(10), Subset::singleton(10, 3)]).unwrap();
        assert_eq!(
            asdim_matrix(&i10, &parts, 1.0, 1).unwrap_err(),
            DecompositionError::PartsOverlap(0, 1)
        );
        let parts = SubsetArray::from_entries(10, vec![Subset::singleton(10, 3)]).unwrap();
        assert_eq!(
            asdim_matrix(&i10, &parts, 1.0, 1).unwrap_err(),
            DecompositionError::PartsDoNotCover(9)
        );
    }

    #[test]
    fn verifier_catches_tampering() {
        let i64 = FiniteMetricSpace::interval(64);
        let aug = asdim_matrix(&i64, &bricks(64, 2.0, 1), 2.0, 1).unwrap();

        let mut uncovered = aug.clone();
        uncovered.matrix.set(0, 0, Subset::empty(64));
        let rep = verify_asdim_matrix(&i64, &uncovered, 2.0);
        assert!(!rep.verdicts["asdim.row_cover"]);

        let mut touching = aug.clone();
        let (h, w) = touching.matrix.shape();
        assert_eq!((h, w), (1, 2));
        let mut wide = aug.clone();
        wide.matrix = SubsetMatrix::new(
            64,
            IndexSet::range(2),
            aug.matrix.cols().clone(),
            vec![
                Subset::full(64),
                Subset::singleton(64, 5),
                Subset::full(64),
                Subset::singleton(64, 7),
            ],
        )
        .unwrap();
        wide.certs = vec![Dim0Certificate { scale: 2.0, bound: ExtReal::INFINITY }; 4];
        let rep = verify_asdim_matrix(&i64, &wide, 2.0);
        assert!(!rep.verdicts["asdim.a_diagonal"]);

        touching.certs[0].bound = ExtReal::ZERO;
        let rep = verify_asdim_matrix(&i64, &touching, 2.0);
        assert!(!rep.verdicts["asdim.bounds"]);
    }
}
