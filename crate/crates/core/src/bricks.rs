//! Generators of disjoint covers: interval bricks, street layouts on planar
//! grids, and a greedy coloured net cover for arbitrary spaces.
//!
//! These are plumbing for the decomposition constructions. Nothing here is
//! trusted: every consumer measures the certificates of what it receives.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::DecompositionError;
use crate::ext::floor_nonneg;
use crate::scale::ScaleGraph;
use crate::space::{FiniteMetricSpace, Metric, Norm};
use crate::subset::Subset;

/// Largest lattice distance joined by one chain step at scale `r`: `2⌊r⌋`.
fn lattice_reach(r: f64) -> usize {
    2 * floor_nonneg(r) as usize
}

/// Layout of a periodic brick cover of an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalLayout {
    /// Length of each `X₁` brick.
    pub brick: usize,
    /// Gap between consecutive bricks (the `X₀` pieces).
    pub gap: usize,
}

impl IntervalLayout {
    /// Bricks wide enough that the gaps are separated at scale `(m+1)r`, and
    /// gaps wide enough that the chain-neighbourhoods of level `< 3m+1` around
    /// consecutive bricks never touch at scale `r`.
    pub fn for_scale(r: f64, m: usize) -> IntervalLayout {
        let q = lattice_reach(r).max(2);
        let brick = lattice_reach((m as f64 + 1.0) * r).max(1);
        // consecutive bricks must be at least q·(6m+1)+1 apart
        let gap = q * (6 * m + 1);
        IntervalLayout { brick, gap }
    }

    pub fn period(&self) -> usize {
        self.brick + self.gap
    }
}

/// Two-part cover `[X₀, X₁]` of `I_len`: `X₁` is a periodic family of bricks
/// with one brick centred in the interval, `X₀` the complement.
pub fn interval_bricks(len: usize, layout: IntervalLayout) -> [Subset; 2] {
    let p = layout.period();
    let start = (len.saturating_sub(layout.brick)) / 2;
    let shift = p - start % p;
    let mut bricks = Subset::empty(len);
    for x in 0..len {
        if (x + shift) % p < layout.brick {
            bricks.insert(x);
        }
    }
    [bricks.complement(), bricks]
}

/// Alternating intervals of one length: even-numbered blocks form `X₀`.
pub fn alternating_intervals(len: usize, block: usize) -> [Subset; 2] {
    assert!(block > 0);
    let even = Subset::from_indices(len, (0..len).filter(|x| (x / block).is_multiple_of(2)));
    [even.clone(), even.complement()]
}

/// Layout of the street cover of a planar grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreetLayout {
    /// Street width.
    pub width: usize,
    /// How far each crossing blob extends beyond the street crossing.
    pub overhang: usize,
    pub period: usize,
}

impl StreetLayout {
    pub fn for_scale(r: f64, m: usize, norm: Norm) -> StreetLayout {
        let q = lattice_reach(r).max(2);
        let width = lattice_reach((m as f64 + 1.0) * r).max(1);
        let sep = q * (6 * m + 1) + 1;
        // street pieces meeting at a corner are 2e+2 apart in l1, e+1 in sup
        let overhang = match norm {
            Norm::L1 => sep.saturating_sub(1) / 2,
            Norm::Sup => sep - 1,
        };
        let blob = width + 2 * overhang;
        StreetLayout {
            width,
            overhang,
            period: blob + sep - 1,
        }
    }

    pub fn blob(&self) -> usize {
        self.width + 2 * self.overhang
    }
}

/// Three-part cover `[X₀, X₁, X₂]` of a 2-dimensional grid: blocks, street
/// segments, and the blobs around street crossings. One crossing is centred.
pub fn grid_streets(
    space: &FiniteMetricSpace,
    layout: StreetLayout,
) -> Result<[Subset; 3], DecompositionError> {
    let Metric::Grid { dims, .. } = space.metric() else {
        return Err(DecompositionError::WrongSpaceKind("grid"));
    };
    if dims.len() != 2 {
        return Err(DecompositionError::WrongSpaceKind("planar grid"));
    }
    let p = layout.period;
    let phase = |side: usize| {
        let start = side.saturating_sub(layout.width) / 2;
        p - start % p
    };
    let (sx, sy) = (phase(dims[0]), phase(dims[1]));
    let blob = layout.blob();
    let mut parts = [
        Subset::empty(space.len()),
        Subset::empty(space.len()),
        Subset::empty(space.len()),
    ];
    for idx in 0..space.len() {
        let (x, y) = (idx / dims[1], idx % dims[1]);
        let (u, v) = ((x + sx) % p, (y + sy) % p);
        let in_blob = (u + layout.overhang) % p < blob && (v + layout.overhang) % p < blob;
        let on_street = u < layout.width || v < layout.width;
        let part = if in_blob {
            2
        } else if on_street {
            1
        } else {
            0
        };
        parts[part].insert(idx);
    }
    Ok(parts)
}

/// Greedy coloured net cover of `domain`.
///
/// Picks an `radius`-net in index order, assigns every point to its nearest
/// net point, then colours the cells so that cells of one colour are never
/// chain-adjacent at the graph's scale. Each colour class therefore has
/// scale-components inside single cells, of diameter at most `2·radius`.
pub fn coarse_cover(graph: &ScaleGraph<'_>, domain: &Subset, radius: f64) -> Vec<Subset> {
    let space = graph.space();
    let mut centres: Vec<usize> = Vec::new();
    for x in domain.iter() {
        if !centres.iter().any(|&c| space.dist(x, c).within(radius)) {
            centres.push(x);
        }
    }
    let n = space.len();
    let mut cell = vec![usize::MAX; n];
    for x in domain.iter() {
        let mut best = 0;
        for (k, &c) in centres.iter().enumerate() {
            if space.dist(x, c) < space.dist(x, centres[best]) {
                best = k;
            }
        }
        cell[x] = best;
    }
    let mut conflicts = vec![Vec::<usize>::new(); centres.len()];
    for x in domain.iter() {
        for y in graph.neighbours(x).intersection(domain).iter() {
            let (a, b) = (cell[x], cell[y]);
            if a != b && !conflicts[a].contains(&b) {
                conflicts[a].push(b);
            }
        }
    }
    let mut colour = vec![usize::MAX; centres.len()];
    let mut colours = 0;
    for k in 0..centres.len() {
        let mut c = 0;
        while conflicts[k].iter().any(|&o| colour[o] == c) {
            c += 1;
        }
        colour[k] = c;
        colours = colours.max(c + 1);
    }
    let mut out = vec![Subset::empty(n); colours];
    for x in domain.iter() {
        out[colour[cell[x]]].insert(x);
    }
    out
}
