//! Subsets of a finite point set, stored as bitsets over point indices.

use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;

/// A subset of the points `0..universe` of a finite space.
///
/// The universe size is part of the value: operations between subsets of
/// different universes are a programming error and panic.
#[derive(Clone)]
pub struct Subset {
    bits: FixedBitSet,
}

impl Subset {
    pub fn empty(universe: usize) -> Subset {
        Subset {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Subset {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Subset { bits }
    }

    /// Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Subset {
        let mut s = Subset::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Like [`Subset::from_indices`] but reports the first out-of-range index.
    pub fn try_from_indices<I: IntoIterator<Item = usize>>(
        universe: usize,
        indices: I,
    ) -> Result<Subset, usize> {
        let mut s = Subset::empty(universe);
        for i in indices {
            if i >= universe {
                return Err(i);
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn singleton(universe: usize, point: usize) -> Subset {
        Subset::from_indices(universe, [point])
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, point: usize) {
        assert!(
            point < self.universe(),
            "point {point} outside universe of size {}",
            self.universe()
        );
        self.bits.insert(point);
    }

    pub fn remove(&mut self, point: usize) {
        self.bits.set(point, false);
    }

    pub fn contains(&self, point: usize) -> bool {
        self.bits.contains(point)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe()
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    fn check(&self, other: &Subset) {
        assert_eq!(
            self.universe(),
            other.universe(),
            "subsets of different spaces"
        );
    }

    pub fn union_with(&mut self, other: &Subset) {
        self.check(other);
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        self.check(other);
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &Subset) {
        self.check(other);
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> Subset {
        let mut s = self.clone();
        s.bits.toggle_range(..);
        s
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.check(other);
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.check(other);
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        !self.is_disjoint(other)
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.universe() == other.universe() && self.bits.ones().eq(other.bits.ones())
    }
}

impl Eq for Subset {}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
