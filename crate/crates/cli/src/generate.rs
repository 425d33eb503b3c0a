//! Seeded random instances. All randomness flows from one ChaCha stream, so a
//! seed fixes every generated space, set, array and profile.

use coarse_core::profile::{Profile, ProfileFn};
use coarse_core::{Edge, ExtReal, FiniteMetricSpace, IndexSet, Norm, Subset, SubsetArray, SubsetMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_c0a5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points at random integer positions on a line. Repeated positions give
/// distinct points at distance 0.
pub fn line_space(rng: &mut impl Rng, n: usize, span: u32) -> FiniteMetricSpace {
    let pos: Vec<u32> = (0..n).map(|_| rng.random_range(0..=span)).collect();
    let dist = pos
        .iter()
        .flat_map(|&a| pos.iter().map(move |&b| ExtReal::finite(a.abs_diff(b) as f64)))
        .collect();
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::from_table("line", labels, dist).expect("line positions form a metric")
}

/// A random weighted graph; with `split` the second half gets no bridge, so
/// the two halves are at distance ∞.
pub fn graph_space(rng: &mut impl Rng, n: usize, extra: usize, split: bool) -> FiniteMetricSpace {
    let cut = if split && n >= 2 { n / 2 } else { n };
    let mut edges = Vec::new();
    for v in 1..n {
        let lo = if v < cut { 0 } else { cut };
        if v > lo {
            let a = rng.random_range(lo..v);
            edges.push(Edge { a, b: v, weight: rng.random_range(1..=4) as f64 });
        }
    }
    for _ in 0..extra {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b && (a < cut) == (b < cut) {
            edges.push(Edge { a, b, weight: rng.random_range(1..=4) as f64 });
        }
    }
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    FiniteMetricSpace::from_graph("graph", labels, edges).expect("positive weights form a metric")
}

/// A random point set of a planar grid, as a subspace.
pub fn grid_sample(rng: &mut impl Rng, side: usize, n: usize, norm: Norm) -> FiniteMetricSpace {
    let grid = FiniteMetricSpace::grid(&[side, side], norm);
    let mut idx: Vec<usize> = (0..grid.len()).collect();
    idx.shuffle(rng);
    idx.truncate(n.min(grid.len()));
    grid.subspace(&Subset::from_indices(grid.len(), idx))
}

/// One of the space families above with at most `max_n` points (at least 1).
pub fn random_space(rng: &mut impl Rng, max_n: usize) -> FiniteMetricSpace {
    let n = rng.random_range(1..=max_n.max(1));
    match rng.random_range(0..5) {
        0 => line_space(rng, n, 3 * n as u32),
        1 => graph_space(rng, n, n / 2, false),
        2 => graph_space(rng, n, n / 3, true),
        3 => {
            let side = (1..).find(|s| s * s >= n).unwrap_or(1) + 1;
            let norm = if rng.random_bool(0.5) { Norm::L1 } else { Norm::Sup };
            grid_sample(rng, side, n, norm)
        }
        _ => {
            let k = rng.random_range(1..=n);
            let left = line_space(rng, k, 2 * k as u32);
            if k == n {
                left
            } else {
                let right = line_space(rng, n - k, 2 * (n - k) as u32);
                FiniteMetricSpace::disjoint_union(vec![left, right])
            }
        }
    }
}

pub fn random_subset(rng: &mut impl Rng, universe: usize, density: f64) -> Subset {
    Subset::from_indices(universe, (0..universe).filter(|_| rng.random_bool(density)))
}

pub fn random_array(rng: &mut impl Rng, universe: usize, len: usize) -> SubsetArray {
    let d = rng.random_range(0.1..0.7);
    let entries = (0..len).map(|_| random_subset(rng, universe, d)).collect();
    SubsetArray::from_entries(universe, entries).expect("entries share the universe")
}

pub fn random_matrix(rng: &mut impl Rng, universe: usize, rows: usize, cols: usize) -> SubsetMatrix {
    let d = rng.random_range(0.1..0.6);
    let entries = (0..rows * cols).map(|_| random_subset(rng, universe, d)).collect();
    SubsetMatrix::new(universe, IndexSet::range(rows), IndexSet::range(cols), entries)
        .expect("entry count matches the shape")
}

/// Cells of width `width` along a line, consecutive cells `> 2r` apart.
pub fn separated_cells(width: usize, r: f64, count: usize) -> (FiniteMetricSpace, Vec<Subset>) {
    let gap = 2 * (r.max(0.0) as usize) + 2;
    let len = count * (width + gap);
    let cells = (0..count)
        .map(|c| {
            let start = c * (width + gap);
            Subset::from_indices(len, start..start + width)
        })
        .collect();
    (FiniteMetricSpace::interval(len), cells)
}

/// A matrix whose columns are scale-r-disjoint: within a column every
/// entry lives in its own cell, cells being more than `2r` apart.
pub fn orthogonal_matrix(
    rng: &mut impl Rng,
    cells: &[Subset],
    rows: usize,
    cols: usize,
) -> SubsetMatrix {
    assert!(cells.len() >= rows, "need one cell per row");
    let universe = cells[0].universe();
    let mut entries = vec![Subset::empty(universe); rows * cols];
    for j in 0..cols {
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.shuffle(rng);
        for i in 0..rows {
            let cell = &cells[order[i]];
            let mut e = Subset::empty(universe);
            for x in cell.iter() {
                if rng.random_bool(0.6) {
                    e.insert(x);
                }
            }
            entries[i * cols + j] = e;
        }
    }
    SubsetMatrix::new(universe, IndexSet::range(rows), IndexSet::range(cols), entries)
        .expect("entry count matches the shape")
}

/// Non-decreasing step function with small integer values starting at
/// `start` or above.
pub fn random_profile_fn(rng: &mut impl Rng, start: f64) -> ProfileFn {
    let steps = rng.random_range(0..4);
    let mut t = 0.0;
    let mut v = start + rng.random_range(0..2) as f64;
    let mut bps = vec![(0.0, v)];
    for _ in 0..steps {
        t += rng.random_range(1..5) as f64;
        v += rng.random_range(0..3) as f64;
        bps.push((t, v));
    }
    ProfileFn::new(bps).expect("thresholds increase and values do not decrease")
}

/// A profile of length 1..=4 with constant head `≥ 1`.
pub fn random_profile(rng: &mut impl Rng) -> Profile {
    let k = rng.random_range(0..4);
    let mut fns = vec![ProfileFn::constant(rng.random_range(1..4) as f64)];
    for _ in 0..k {
        fns.push(random_profile_fn(rng, 1.0));
    }
    Profile::new(fns).expect("generated profiles are well formed")
}

/// A non-decreasing positive sequence of `len` scales.
pub fn random_scale_sequence(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let mut r = rng.random_range(1..3) as f64;
    (0..len)
        .map(|_| {
            r += rng.random_range(0..4) as f64;
            r
        })
        .collect()
}
